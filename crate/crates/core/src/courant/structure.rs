use std::fmt;

use num_rational::BigRational;

use crate::algebroid::{trace_pairing, Connection};
use crate::cartan::{DiffForm, MatrixForm, VectorField};
use crate::error::{Error, Result};
use crate::ring::{Context, RatFunc};

/// A section `(α, a, ξ)` of `Ω¹ ⊕ gl_r ⊕ T` (with `r = 0` for exact algebroids).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CourantElement {
    pub alpha: DiffForm,
    pub a: MatrixForm,
    pub xi: VectorField,
}

impl CourantElement {
    pub fn new(alpha: DiffForm, a: MatrixForm, xi: VectorField) -> Result<Self> {
        alpha.require_degree(1)?;
        if a.degree() != 0 && !a.is_zero() {
            return Err(Error::DegreeError("g-part must be a function matrix".into()));
        }
        if alpha.dim() != xi.dim() || a.dim() != xi.dim() {
            return Err(Error::ContextMismatch { left: xi.dim(), right: alpha.dim().max(a.dim()) });
        }
        Ok(CourantElement { alpha, a: MatrixForm::from_entries(a.dim(), a.rank(), 0, a.entries().to_vec())?, xi })
    }

    pub fn zero(n: usize, r: usize) -> Self {
        CourantElement { alpha: DiffForm::zero(n), a: MatrixForm::zero(n, r, 0), xi: VectorField::zero(n) }
    }

    pub fn form(r: usize, alpha: DiffForm) -> Self {
        let n = alpha.dim();
        CourantElement { alpha, a: MatrixForm::zero(n, r, 0), xi: VectorField::zero(n) }
    }

    pub fn matrix(a: MatrixForm) -> Self {
        let n = a.dim();
        CourantElement { alpha: DiffForm::zero(n), a, xi: VectorField::zero(n) }
    }

    pub fn field(r: usize, xi: VectorField) -> Self {
        let n = xi.dim();
        CourantElement { alpha: DiffForm::zero(n), a: MatrixForm::zero(n, r, 0), xi }
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn rank(&self) -> usize {
        self.a.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.a.is_zero() && self.xi.is_zero()
    }

    pub fn add(&self, o: &CourantElement) -> CourantElement {
        CourantElement { alpha: &self.alpha + &o.alpha, a: self.a.add(&o.a), xi: self.xi.add(&o.xi) }
    }

    pub fn sub(&self, o: &CourantElement) -> CourantElement {
        CourantElement { alpha: &self.alpha - &o.alpha, a: self.a.sub(&o.a), xi: self.xi.sub(&o.xi) }
    }

    pub fn neg(&self) -> CourantElement {
        CourantElement { alpha: -&self.alpha, a: self.a.neg(), xi: self.xi.neg() }
    }

    pub fn scale(&self, f: &RatFunc) -> CourantElement {
        CourantElement { alpha: self.alpha.scale(f), a: self.a.scale(f), xi: self.xi.scale(f) }
    }

    pub fn display(&self, ctx: &Context) -> String {
        let rows: Vec<String> = (0..self.rank())
            .map(|i| {
                let row: Vec<String> = (0..self.rank()).map(|j| ctx.print(&self.a.function(i, j))).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        format!("({}; [{}]; {})", ctx.print_form(&self.alpha), rows.join(", "), ctx.print_vector(&self.xi))
    }
}

impl fmt::Debug for CourantElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {:?}; {:?})", self.alpha, self.a, self.xi)
    }
}

/// Generators of `Â` as a module: `dx_k = ∂(x_k)`, `E_ij` and `∂_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Dx(usize),
    E(usize, usize),
    D(usize),
}

/// `½⟨c ∧ c⟩` of a connection.
pub fn pontryagin_form(conn: &Connection) -> DiffForm {
    let c = conn.curvature();
    c.pair(&c).scale_q(&BigRational::new(1.into(), 2.into()))
}

/// The algebroid `Â_{∇,H}` (or `Q_H` when `r = 0`) in its split presentation.
#[derive(Clone)]
pub struct CourantStructure {
    n: usize,
    r: usize,
    conn: Option<Connection>,
    h: DiffForm,
    curvature: MatrixForm,
    admissible: bool,
    table: Vec<Option<Vec<RatFunc>>>,
}

impl fmt::Debug for CourantStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CourantStructure")
            .field("n", &self.n)
            .field("r", &self.r)
            .field("omega", &self.conn.as_ref().map(|c| &c.omega))
            .field("h", &self.h)
            .field("admissible", &self.admissible)
            .finish()
    }
}

impl PartialEq for CourantStructure {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.conn == other.conn && self.h == other.h
    }
}

impl CourantStructure {
    /// `Q_H = Ω¹ ⊕ T` with bracket twisted by `H`.
    pub fn exact(n: usize, h: DiffForm) -> Result<Self> {
        Self::build(n, 0, None, h)
    }

    /// `Â_{∇,H}` for a connection on the trivial rank-`r` bundle.
    pub fn extension(conn: Connection, h: DiffForm) -> Result<Self> {
        let (n, r) = (conn.dim(), conn.rank());
        if r == 0 {
            return Self::exact(n, h);
        }
        Self::build(n, r, Some(conn), h)
    }

    fn build(n: usize, r: usize, conn: Option<Connection>, h: DiffForm) -> Result<Self> {
        if h.dim() != n {
            return Err(Error::ContextMismatch { left: n, right: h.dim() });
        }
        h.require_degree(3)?;
        let curvature = match &conn {
            Some(c) => c.curvature(),
            None => MatrixForm::zero(n, 0, 2),
        };
        let p1 = match &conn {
            Some(c) => pontryagin_form(c),
            None => DiffForm::zero(n),
        };
        let admissible = h.ext_d() == p1;
        let mut s = CourantStructure { n, r, conn, h, curvature, admissible, table: Vec::new() };
        s.table = s.generator_table();
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn h(&self) -> &DiffForm {
        &self.h
    }

    pub fn connection(&self) -> Option<&Connection> {
        self.conn.as_ref()
    }

    /// The connection, or the zero connection of rank 0 for exact structures.
    pub fn connection_or_flat(&self) -> Connection {
        self.conn.clone().unwrap_or_else(|| Connection::flat(self.n, self.r))
    }

    /// `c(∇)`, zero for exact structures.
    pub fn curvature(&self) -> &MatrixForm {
        &self.curvature
    }

    /// Whether `dH = ½⟨c(∇) ∧ c(∇)⟩`.
    pub fn is_admissible(&self) -> bool {
        self.admissible
    }

    pub fn is_exact(&self) -> bool {
        self.r == 0
    }

    pub fn contains(&self, e: &CourantElement) -> bool {
        e.dim() == self.n && e.rank() == self.r && e.alpha.dim() == self.n && e.a.dim() == self.n
    }

    pub fn check(&self, e: &CourantElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::StructureMismatch(format!(
                "element of rank {} on {} coordinates, structure of rank {} on {}",
                e.rank(),
                e.dim(),
                self.r,
                self.n
            )))
        }
    }

    pub fn zero(&self) -> CourantElement {
        CourantElement::zero(self.n, self.r)
    }

    pub fn num_generators(&self) -> usize {
        2 * self.n + self.r * self.r
    }

    pub fn generator_index(&self, g: Generator) -> usize {
        match g {
            Generator::Dx(k) => k,
            Generator::E(i, j) => self.n + i * self.r + j,
            Generator::D(i) => self.n + self.r * self.r + i,
        }
    }

    pub fn generator_at(&self, idx: usize) -> Generator {
        let rr = self.r * self.r;
        if idx < self.n {
            Generator::Dx(idx)
        } else if idx < self.n + rr {
            let k = idx - self.n;
            Generator::E(k / self.r, k % self.r)
        } else {
            Generator::D(idx - self.n - rr)
        }
    }

    pub fn generator(&self, g: Generator) -> CourantElement {
        let (n, r) = (self.n, self.r);
        match g {
            Generator::Dx(k) => CourantElement::form(r, DiffForm::dx(n, k)),
            Generator::E(i, j) => CourantElement::matrix(MatrixForm::elementary(n, r, i, j)),
            Generator::D(i) => CourantElement::field(r, VectorField::coordinate(n, i)),
        }
    }

    /// Coefficients of `e` on the generators.
    pub fn coefficients(&self, e: &CourantElement) -> Vec<RatFunc> {
        let mut out = Vec::with_capacity(self.num_generators());
        let units = VectorField::coordinates(self.n);
        for u in &units {
            out.push(e.alpha.interior(u).as_function());
        }
        for i in 0..self.r {
            for j in 0..self.r {
                out.push(e.a.function(i, j));
            }
        }
        out.extend(e.xi.components().iter().cloned());
        out
    }

    pub fn from_coefficients(&self, c: &[RatFunc]) -> CourantElement {
        let (n, r) = (self.n, self.r);
        let mut alpha = DiffForm::zero(n);
        for (k, f) in c[..n].iter().enumerate() {
            if !f.is_zero() {
                alpha.add_term(1 << k, f.clone());
            }
        }
        let rows = (0..r).map(|i| c[n + i * r..n + (i + 1) * r].to_vec()).collect();
        let a = MatrixForm::from_functions(n, rows);
        let a = if r == 0 { MatrixForm::zero(n, 0, 0) } else { a };
        CourantElement { alpha, a, xi: VectorField::new(c[n + r * r..].to_vec()) }
    }

    fn gen_anchor(&self, idx: usize) -> Option<usize> {
        match self.generator_at(idx) {
            Generator::D(i) => Some(i),
            _ => None,
        }
    }

    fn gen_pairing(&self, u: usize, v: usize) -> i64 {
        match (self.generator_at(u), self.generator_at(v)) {
            (Generator::Dx(k), Generator::D(i)) | (Generator::D(i), Generator::Dx(k)) => i64::from(k == i),
            (Generator::E(a, b), Generator::E(c, d)) => i64::from(b == c && a == d),
            _ => 0,
        }
    }

    fn generator_table(&self) -> Vec<Option<Vec<RatFunc>>> {
        let g = self.num_generators();
        let n = self.n;
        let fields = VectorField::coordinates(n);
        let omega = self.connection_or_flat();
        let mut table = vec![None; g * g];
        let forms_of = |coef: &dyn Fn(usize) -> RatFunc| {
            let mut a = DiffForm::zero(n);
            for k in 0..n {
                let c = coef(k);
                if !c.is_zero() {
                    a.add_term(1 << k, c);
                }
            }
            a
        };
        for u in 0..g {
            for v in 0..g {
                let value = match (self.generator_at(u), self.generator_at(v)) {
                    (Generator::D(i), Generator::D(j)) => {
                        let alpha = self.h.interior(&fields[i]).interior(&fields[j]);
                        let cij = self.curvature.eval(&[fields[i].clone(), fields[j].clone()]);
                        let cij = if self.r == 0 { MatrixForm::zero(n, 0, 0) } else { cij };
                        CourantElement { alpha, a: cij, xi: VectorField::zero(n) }
                    }
                    (Generator::D(i), Generator::E(p, q)) => {
                        let e = MatrixForm::elementary(n, self.r, p, q);
                        let alpha = forms_of(&|k| {
                            -trace_pairing(&self.curvature.eval(&[fields[i].clone(), fields[k].clone()]), &e)
                        });
                        CourantElement { alpha, a: omega.component(i).bracket(&e), xi: VectorField::zero(n) }
                    }
                    (Generator::E(p, q), Generator::D(i)) => {
                        let e = MatrixForm::elementary(n, self.r, p, q);
                        let alpha = forms_of(&|k| {
                            trace_pairing(&self.curvature.eval(&[fields[i].clone(), fields[k].clone()]), &e)
                        });
                        CourantElement { alpha, a: omega.component(i).bracket(&e).neg(), xi: VectorField::zero(n) }
                    }
                    (Generator::E(p, q), Generator::E(s, t)) => {
                        let e1 = MatrixForm::elementary(n, self.r, p, q);
                        let e2 = MatrixForm::elementary(n, self.r, s, t);
                        let alpha = forms_of(&|k| trace_pairing(&omega.component(k).bracket(&e1), &e2));
                        CourantElement { alpha, a: e1.bracket(&e2), xi: VectorField::zero(n) }
                    }
                    _ => continue,
                };
                if !value.is_zero() {
                    table[u * g + v] = Some(self.coefficients(&value));
                }
            }
        }
        table
    }

    /// The bracket of two generators.
    pub fn generator_bracket(&self, u: Generator, v: Generator) -> CourantElement {
        let g = self.num_generators();
        match &self.table[self.generator_index(u) * g + self.generator_index(v)] {
            Some(c) => self.from_coefficients(c),
            None => self.zero(),
        }
    }

    /// The Leibniz bracket, expanded from the generator table:
    /// `[f u, g v] = −fg [v,u] − g π(v)(f) u + g ⟨u,v⟩ df + f π(u)(g) v`.
    pub fn bracket(&self, e1: &CourantElement, e2: &CourantElement) -> Result<CourantElement> {
        self.check(e1)?;
        self.check(e2)?;
        let g = self.num_generators();
        let n = self.n;
        let c1 = self.coefficients(e1);
        let c2 = self.coefficients(e2);
        let mut out = vec![RatFunc::zero(); g];
        for (u, f) in c1.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
            for (v, h) in c2.iter().enumerate().filter(|(_, h)| !h.is_zero()) {
                if let Some(t) = &self.table[v * g + u] {
                    let fh = f * h;
                    for (w, tw) in t.iter().enumerate() {
                        if !tw.is_zero() {
                            out[w] = &out[w] - &(&fh * tw);
                        }
                    }
                }
                if let Some(i) = self.gen_anchor(v) {
                    let df = f.partial(i);
                    if !df.is_zero() {
                        out[u] = &out[u] - &(h * &df);
                    }
                }
                let p = self.gen_pairing(u, v);
                if p != 0 {
                    let hp = h.scale_int(p);
                    for k in 0..n {
                        let df = f.partial(k);
                        if !df.is_zero() {
                            out[k] = &out[k] + &(&hp * &df);
                        }
                    }
                }
                if let Some(i) = self.gen_anchor(u) {
                    let dh = h.partial(i);
                    if !dh.is_zero() {
                        out[v] = &out[v] + &(f * &dh);
                    }
                }
            }
        }
        Ok(self.from_coefficients(&out))
    }

    /// `ι_{ξ2} α1 + ι_{ξ1} α2 + Tr(a1 a2)`.
    pub fn pairing(&self, e1: &CourantElement, e2: &CourantElement) -> Result<RatFunc> {
        self.check(e1)?;
        self.check(e2)?;
        let mut v = &e1.alpha.interior(&e2.xi).as_function() + &e2.alpha.interior(&e1.xi).as_function();
        if self.r > 0 {
            v = &v + &trace_pairing(&e1.a, &e2.a);
        }
        Ok(v)
    }

    pub fn anchor<'a>(&self, e: &'a CourantElement) -> &'a VectorField {
        &e.xi
    }

    /// `∂f = (df, 0, 0)`.
    pub fn deriv(&self, f: &RatFunc) -> CourantElement {
        CourantElement::form(self.r, DiffForm::function(self.n, f.clone()).ext_d())
    }

    /// `ι_{ξ2} ι_{ξ1} ι_{ξ0}(−½⟨c ∧ c⟩ + dH)`.
    pub fn jacobiator_predicted(&self, xi0: &VectorField, xi1: &VectorField, xi2: &VectorField) -> DiffForm {
        let p1 = match &self.conn {
            Some(c) => pontryagin_form(c),
            None => DiffForm::zero(self.n),
        };
        let form = &self.h.ext_d() - &p1;
        form.interior(xi0).interior(xi1).interior(xi2)
    }

    /// The same algebroid with `H` replaced by `H + h`.
    pub fn twist_by_h(&self, h: &DiffForm) -> Result<CourantStructure> {
        let h = self.h.try_add(h)?;
        match &self.conn {
            Some(c) => Self::extension(c.clone(), h),
            None => Self::exact(self.n, h),
        }
    }
}

/// A polynomial `H` with `dH = ½⟨c(∇) ∧ c(∇)⟩`, found by a linear ansatz.
pub fn admissible_h(conn: &Connection) -> Result<DiffForm> {
    let p1 = pontryagin_form(conn);
    crate::linalg::polynomial_primitive(&p1, p1.coefficient_degree() + 1)
}
