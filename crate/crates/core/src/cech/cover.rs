use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::BigRational;

use crate::cartan::{det, ChartMap, DiffForm, MatrixForm};
use crate::error::{Error, Result};
use crate::ring::{Context, RatFunc};

/// A formal cover: charts sharing one coordinate context, transitions on
/// declared overlaps and the declared nerve.
///
/// `φ_{ij}` maps chart `j` to chart `i`: its images are the chart-`i`
/// coordinates written in chart-`j` coordinates, so `φ_{ij}^*` moves forms
/// from chart `i` to chart `j`.
#[derive(Debug, Clone)]
pub struct CoverSpec {
    ctx: Arc<Context>,
    charts: Vec<String>,
    transitions: BTreeMap<(usize, usize), (ChartMap, ChartMap)>,
    simplices: BTreeSet<Vec<usize>>,
}

fn faces(s: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..s.len()).map(move |j| {
        let mut f = s.to_vec();
        f.remove(j);
        f
    })
}

impl CoverSpec {
    /// `transitions` holds `(i, j, φ_{ij}, φ_{ji})` for `i < j`; missing pairs of
    /// the nerve get identity transitions.
    pub fn new(
        ctx: Arc<Context>,
        charts: Vec<String>,
        transitions: Vec<(usize, usize, ChartMap, ChartMap)>,
        nerve: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = ctx.dim();
        let m = charts.len();
        let mut simplices = BTreeSet::new();
        for i in 0..m {
            simplices.insert(vec![i]);
        }
        for s in nerve {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            if s.iter().any(|&i| i >= m) {
                return Err(Error::MissingSimplex(s));
            }
            simplices.insert(s);
        }
        for s in &simplices {
            if s.len() > 1 {
                for f in faces(s) {
                    if !simplices.contains(&f) {
                        return Err(Error::MissingSimplex(f));
                    }
                }
            }
        }
        let mut map = BTreeMap::new();
        for (i, j, fwd, inv) in transitions {
            let key = if i < j { (i, j) } else { (j, i) };
            let (fwd, inv) = if i < j { (fwd, inv) } else { (inv, fwd) };
            if !simplices.contains(&vec![key.0, key.1]) {
                return Err(Error::MissingSimplex(vec![key.0, key.1]));
            }
            for f in [&fwd, &inv] {
                if f.source_dim() != n || f.target_dim() != n {
                    return Err(Error::ContextMismatch { left: n, right: f.source_dim() });
                }
            }
            if !fwd.compose(&inv)?.is_identity() || !inv.compose(&fwd)?.is_identity() {
                return Err(Error::CocycleViolation {
                    simplex: vec![key.0, key.1],
                    msg: "transition and inverse do not compose to the identity".into(),
                });
            }
            map.insert(key, (fwd, inv));
        }
        let cover = CoverSpec { ctx, charts, transitions: map, simplices };
        for s in cover.simplices_of_degree(2) {
            let (i, j, k) = (s[0], s[1], s[2]);
            if cover.transition(i, j).compose(&cover.transition(j, k))? != cover.transition(i, k) {
                return Err(Error::CocycleViolation { simplex: s, msg: "φ_ij∘φ_jk ≠ φ_ik".into() });
            }
        }
        Ok(cover)
    }

    /// All charts share the coordinates and every transition is the identity.
    pub fn trivial(ctx: Arc<Context>, charts: usize, nerve: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(ctx, (0..charts).map(|i| format!("U{i}")).collect(), Vec::new(), nerve)
    }

    /// Every subset of the charts is an overlap.
    pub fn full_nerve(charts: usize, max_degree: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << charts) {
            if mask.count_ones() as usize >= 2 && mask.count_ones() as usize <= max_degree + 1 {
                out.push((0..charts).filter(|i| mask & (1 << i) != 0).collect());
            }
        }
        out
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn charts(&self) -> &[String] {
        &self.charts
    }

    pub fn num_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    pub fn simplices_of_degree(&self, p: usize) -> Vec<Vec<usize>> {
        self.simplices.iter().filter(|s| s.len() == p + 1).cloned().collect()
    }

    pub fn max_degree(&self) -> usize {
        self.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    /// `φ_{ij}`, from chart `j` to chart `i`.
    pub fn transition(&self, i: usize, j: usize) -> ChartMap {
        if i == j {
            return ChartMap::identity(self.dim());
        }
        let key = if i < j { (i, j) } else { (j, i) };
        match self.transitions.get(&key) {
            Some((fwd, inv)) => {
                if i < j {
                    fwd.clone()
                } else {
                    inv.clone()
                }
            }
            None => ChartMap::identity(self.dim()),
        }
    }

    /// Rewrites a form on chart `from` in the coordinates of chart `to`.
    pub fn transport(&self, from: usize, to: usize, a: &DiffForm) -> Result<DiffForm> {
        if from == to {
            return Ok(a.clone());
        }
        self.transition(from, to).pullback(a)
    }

    pub fn transport_function(&self, from: usize, to: usize, f: &RatFunc) -> Result<RatFunc> {
        if from == to {
            return Ok(f.clone());
        }
        self.transition(from, to).pull_function(f)
    }
}

/// A Čech cochain in `Č^p(Ω^q)`; the value on `(i_0..i_p)` lives in chart `i_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CechCochain {
    pub p: usize,
    pub q: usize,
    pub values: BTreeMap<Vec<usize>, DiffForm>,
}

impl CechCochain {
    pub fn zero(cover: &CoverSpec, p: usize, q: usize) -> Self {
        let n = cover.dim();
        CechCochain { p, q, values: cover.simplices_of_degree(p).into_iter().map(|s| (s, DiffForm::zero(n))).collect() }
    }

    pub fn from_values(p: usize, q: usize, values: BTreeMap<Vec<usize>, DiffForm>) -> Result<Self> {
        for (s, a) in &values {
            if s.len() != p + 1 {
                return Err(Error::DegreeError(format!("simplex {s:?} in a degree-{p} cochain")));
            }
            if !a.is_zero() && !a.is_homogeneous(q) {
                return Err(Error::DegreeError(format!("value on {s:?} is not a {q}-form")));
            }
        }
        Ok(CechCochain { p, q, values })
    }

    pub fn get(&self, s: &[usize]) -> Result<&DiffForm> {
        self.values.get(s).ok_or_else(|| Error::MissingSimplex(s.to_vec()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(DiffForm::is_zero)
    }

    fn zip(&self, other: &CechCochain, sign: i64) -> Result<CechCochain> {
        if self.p != other.p || self.q != other.q {
            return Err(Error::DegreeError(format!(
                "Č^{}(Ω^{}) vs Č^{}(Ω^{})",
                self.p, self.q, other.p, other.q
            )));
        }
        let mut values = self.values.clone();
        for (s, a) in &other.values {
            let e = values.entry(s.clone()).or_insert_with(|| DiffForm::zero(a.dim()));
            *e = &*e + &a.scale_int(sign);
        }
        Ok(CechCochain { p: self.p, q: self.q, values })
    }

    pub fn add(&self, other: &CechCochain) -> Result<CechCochain> {
        self.zip(other, 1)
    }

    pub fn sub(&self, other: &CechCochain) -> Result<CechCochain> {
        self.zip(other, -1)
    }

    pub fn scale_q(&self, c: &BigRational) -> CechCochain {
        CechCochain { p: self.p, q: self.q, values: self.values.iter().map(|(s, a)| (s.clone(), a.scale_q(c))).collect() }
    }

    pub fn scale_int(&self, c: i64) -> CechCochain {
        CechCochain { p: self.p, q: self.q, values: self.values.iter().map(|(s, a)| (s.clone(), a.scale_int(c))).collect() }
    }

    /// Componentwise de Rham differential.
    pub fn ext_d(&self) -> CechCochain {
        CechCochain { p: self.p, q: self.q + 1, values: self.values.iter().map(|(s, a)| (s.clone(), a.ext_d())).collect() }
    }
}

/// `(δ̌c)_{i_0..i_{p+1}} = Σ_j (−1)^j c_{i_0..î_j..i_{p+1}}`, the last face pulled
/// back from chart `i_p` to chart `i_{p+1}`.
pub fn cech_d(cover: &CoverSpec, c: &CechCochain) -> Result<CechCochain> {
    let mut values = BTreeMap::new();
    for s in cover.simplices_of_degree(c.p + 1) {
        let last = *s.last().expect("non-empty");
        let mut acc = DiffForm::zero(cover.dim());
        for (j, f) in faces(&s).enumerate() {
            let v = c.get(&f)?;
            let v = cover.transport(*f.last().expect("non-empty"), last, v)?;
            acc = if j % 2 == 0 { &acc + &v } else { &acc - &v };
        }
        values.insert(s, acc);
    }
    Ok(CechCochain { p: c.p + 1, q: c.q, values })
}

/// `(dB, (−1)^q δ̌B)` for `B ∈ Č^p(Ω^q)`.
pub fn total_d(cover: &CoverSpec, c: &CechCochain) -> Result<(CechCochain, CechCochain)> {
    let dc = cech_d(cover, c)?;
    let dc = if c.q % 2 == 0 { dc } else { dc.scale_int(-1) };
    Ok((c.ext_d(), dc))
}

/// An element of the total complex: one cochain per Čech degree.
#[derive(Debug, Clone)]
pub struct TotalCochain {
    pub degree: usize,
    pub parts: BTreeMap<usize, CechCochain>,
}

impl TotalCochain {
    pub fn new(degree: usize) -> Self {
        TotalCochain { degree, parts: BTreeMap::new() }
    }

    pub fn from_parts(degree: usize, parts: Vec<CechCochain>) -> Result<Self> {
        let mut out = TotalCochain::new(degree);
        for c in parts {
            out.insert(c)?;
        }
        Ok(out)
    }

    /// Adds `c` to the component of its Čech degree.
    pub fn insert(&mut self, c: CechCochain) -> Result<()> {
        if c.p + c.q != self.degree {
            return Err(Error::DegreeError(format!("Č^{}(Ω^{}) in total degree {}", c.p, c.q, self.degree)));
        }
        let merged = match self.parts.remove(&c.p) {
            Some(old) => old.add(&c)?,
            None => c,
        };
        self.parts.insert(merged.p, merged);
        Ok(())
    }

    /// The `Č^p` component, zero when absent.
    pub fn part(&self, cover: &CoverSpec, p: usize) -> CechCochain {
        match self.parts.get(&p) {
            Some(c) => c.clone(),
            None => CechCochain::zero(cover, p, self.degree.saturating_sub(p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(CechCochain::is_zero)
    }

    fn combine(&self, other: &TotalCochain, sign: i64) -> Result<TotalCochain> {
        if self.degree != other.degree {
            return Err(Error::DegreeError(format!("total degree {} vs {}", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for c in other.parts.values() {
            out.insert(c.scale_int(sign))?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &TotalCochain) -> Result<TotalCochain> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &TotalCochain) -> Result<TotalCochain> {
        self.combine(other, -1)
    }

    pub fn scale_q(&self, c: &BigRational) -> TotalCochain {
        TotalCochain { degree: self.degree, parts: self.parts.iter().map(|(p, x)| (*p, x.scale_q(c))).collect() }
    }

    pub fn scale_int(&self, c: i64) -> TotalCochain {
        TotalCochain { degree: self.degree, parts: self.parts.iter().map(|(p, x)| (*p, x.scale_int(c))).collect() }
    }

    /// `(d±δ̌)`, dropping components beyond the form degree `n` or the nerve.
    pub fn total_d(&self, cover: &CoverSpec) -> Result<TotalCochain> {
        let mut out = TotalCochain::new(self.degree + 1);
        for c in self.parts.values() {
            let (d, dc) = total_d(cover, c)?;
            if d.q <= cover.dim() {
                out.insert(d)?;
            }
            if dc.p <= cover.max_degree() {
                out.insert(dc)?;
            }
        }
        Ok(out)
    }
}

/// Absent components count as zero.
impl PartialEq for TotalCochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl Eq for TotalCochain {}

/// Transition matrices `g_{ij}` on declared pairs `i < j`, written in chart `j`,
/// with frames related by `s_j = s_i g_{ij}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleCocycle {
    pub rank: usize,
    pub g: BTreeMap<(usize, usize), Vec<Vec<RatFunc>>>,
}

impl BundleCocycle {
    pub fn new(cover: &CoverSpec, rank: usize, g: BTreeMap<(usize, usize), Vec<Vec<RatFunc>>>) -> Result<Self> {
        let out = BundleCocycle { rank, g };
        out.validate(cover)?;
        Ok(out)
    }

    /// `g_{ij}`, identity for `i = j`.
    pub fn matrix(&self, i: usize, j: usize) -> Result<Vec<Vec<RatFunc>>> {
        if i == j {
            return Ok(MatrixForm::identity(0, self.rank).functions());
        }
        self.g.get(&(i, j)).cloned().ok_or_else(|| Error::MissingSimplex(vec![i, j]))
    }

    /// `g_{ij}` as a 0-form matrix.
    pub fn matrix_form(&self, cover: &CoverSpec, i: usize, j: usize) -> Result<MatrixForm> {
        Ok(MatrixForm::from_functions(cover.dim(), self.matrix(i, j)?))
    }

    pub fn validate(&self, cover: &CoverSpec) -> Result<()> {
        for s in cover.simplices_of_degree(1) {
            let m = self.matrix(s[0], s[1])?;
            if m.len() != self.rank || m.iter().any(|r| r.len() != self.rank) {
                return Err(Error::RankMismatch { left: self.rank, right: m.len() });
            }
            if det(&m).is_zero() {
                return Err(Error::CocycleViolation { simplex: s, msg: "det g vanishes".into() });
            }
        }
        for s in cover.simplices_of_degree(2) {
            let (i, j, k) = (s[0], s[1], s[2]);
            let gij = self.matrix_form(cover, i, j)?.try_map(|e| cover.transport(j, k, e))?;
            let lhs = gij.mul(&self.matrix_form(cover, j, k)?);
            if lhs != self.matrix_form(cover, i, k)? {
                return Err(Error::CocycleViolation { simplex: s, msg: "g_ij g_jk ≠ g_ik".into() });
            }
        }
        Ok(())
    }
}
