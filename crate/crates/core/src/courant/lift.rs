use num_rational::BigRational;

use super::structure::{CourantElement, CourantStructure};
use crate::cartan::{DiffForm, MatrixForm, VectorField};
use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// A function-linear section `T → Â`, stored by its values on coordinate fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lift {
    pub images: Vec<CourantElement>,
}

impl Lift {
    pub fn new(images: Vec<CourantElement>) -> Result<Self> {
        let n = images.len();
        for (i, e) in images.iter().enumerate() {
            if e.xi != VectorField::coordinate(n, i) {
                return Err(Error::NotASplitting(format!("anchor of the image of ∂{} is {:?}", i + 1, e.xi)));
            }
        }
        Ok(Lift { images })
    }

    /// Samples a section given as a map and checks function-linearity on test multiples.
    pub fn from_fn<F: Fn(&VectorField) -> CourantElement>(n: usize, f: F) -> Result<Self> {
        let fields = VectorField::coordinates(n);
        let images: Vec<CourantElement> = fields.iter().map(&f).collect();
        let tests: Vec<RatFunc> = (0..n).map(|k| &RatFunc::var(k) + &RatFunc::from_int(2)).collect();
        for (i, x) in fields.iter().enumerate() {
            for g in &tests {
                if f(&x.scale(g)) != images[i].scale(g) {
                    return Err(Error::NotLinear(format!("value on ({:?})·∂{}", g, i + 1)));
                }
            }
            for (j, y) in fields.iter().enumerate().skip(i + 1) {
                if f(&x.add(y)) != images[i].add(&images[j]) {
                    return Err(Error::NotLinear(format!("value on ∂{} + ∂{}", i + 1, j + 1)));
                }
            }
        }
        Self::new(images)
    }

    /// The canonical inclusion `ξ ↦ (0, 0, ξ)`.
    pub fn canonical(s: &CourantStructure) -> Self {
        let n = s.dim();
        Lift { images: VectorField::coordinates(n).into_iter().map(|x| CourantElement::field(s.rank(), x)).collect() }
    }

    /// `ξ ↦ ∇(ξ) + ι_ξ α`.
    pub fn shifted(&self, alpha: &DiffForm) -> Self {
        let n = self.images.len();
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut e = e.clone();
                e.alpha = &e.alpha + &alpha.interior(&VectorField::coordinate(n, i));
                e
            })
            .collect();
        Lift { images }
    }

    pub fn apply(&self, xi: &VectorField) -> CourantElement {
        let (n, r) = (self.images.len(), self.images.first().map_or(0, |e| e.rank()));
        xi.components()
            .iter()
            .zip(&self.images)
            .filter(|(f, _)| !f.is_zero())
            .fold(CourantElement::zero(n, r), |acc, (f, e)| acc.add(&e.scale(f)))
    }

    pub fn is_isotropic(&self, s: &CourantStructure) -> Result<bool> {
        for e in &self.images {
            for g in &self.images {
                if !s.pairing(e, g)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Adds `φ` with `ι_η φ(ξ) = −½⟨s(ξ), s(η)⟩`, making the section isotropic.
pub fn isotropize(s: &CourantStructure, lift: &Lift) -> Result<Lift> {
    let n = s.dim();
    let half = BigRational::new((-1).into(), 2.into());
    let mut images = Vec::with_capacity(n);
    for e in &lift.images {
        let mut corr = DiffForm::zero(n);
        for (j, g) in lift.images.iter().enumerate() {
            let p = s.pairing(e, g)?;
            if !p.is_zero() {
                corr.add_term(1 << j, p.scale(&half));
            }
        }
        let mut e = e.clone();
        e.alpha = &e.alpha + &corr;
        images.push(e);
    }
    Ok(Lift { images })
}

/// The `g`-valued curvature 2-form and relative curvature 3-form of an isotropic lift:
/// `C(ξ,η) = [∇ξ,∇η] − ∇[ξ,η]` and `ι_ζ c_rel(ξ,η) = ⟨C(ξ,η), ∇ζ⟩`.
pub fn curvature_courant(s: &CourantStructure, lift: &Lift) -> Result<(MatrixForm, DiffForm)> {
    let (n, r) = (s.dim(), s.rank());
    if lift.images.len() != n {
        return Err(Error::NotASplitting(format!("{} images for {} coordinates", lift.images.len(), n)));
    }
    let lift = Lift::new(lift.images.clone())?;
    if !lift.is_isotropic(s)? {
        return Err(Error::NotIsotropic("images of coordinate fields pair nontrivially".into()));
    }
    let mut c = vec![vec![s.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                c[i][j] = s.bracket(&lift.images[i], &lift.images[j])?;
            }
        }
    }
    let mut entries = vec![DiffForm::zero(n); r * r];
    for i in 0..n {
        for j in i + 1..n {
            for p in 0..r {
                for q in 0..r {
                    let f = c[i][j].a.function(p, q);
                    if !f.is_zero() {
                        entries[p * r + q].add_term((1 << i) | (1 << j), f);
                    }
                }
            }
        }
    }
    let g_part = MatrixForm::from_entries(n, r, 2, entries)?;
    let val = |i: usize, j: usize, k: usize| -> Result<RatFunc> {
        if i == j {
            Ok(RatFunc::zero())
        } else {
            s.pairing(&c[i][j], &lift.images[k])
        }
    };
    let mut rel = DiffForm::zero(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = val(i, j, k)?;
                let expected = match sort3(i, j, k) {
                    (Some((a, b, cc)), sign) => val(a, b, cc)?.scale_int(sign),
                    (None, _) => RatFunc::zero(),
                };
                if v != expected {
                    return Err(Error::NotSkew(format!("c_rel(∂{}, ∂{}, ∂{})", i + 1, j + 1, k + 1)));
                }
                if i < j && j < k && !v.is_zero() {
                    rel.add_term((1 << i) | (1 << j) | (1 << k), v);
                }
            }
        }
    }
    Ok((g_part, rel))
}

fn sort3(i: usize, j: usize, k: usize) -> (Option<(usize, usize, usize)>, i64) {
    if i == j || j == k || i == k {
        return (None, 0);
    }
    let mut v = [i, j, k];
    let mut sign = 1;
    for a in 0..3 {
        for b in 0..2 - a {
            if v[b] > v[b + 1] {
                v.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    (Some((v[0], v[1], v[2])), sign)
}
