//! Seeded random samples with bounded degree and term count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cartan::{basis_degree, DiffForm, MatrixForm, VectorField};
use crate::ring::{Monomial, MultiPoly, RatFunc, MAX_VARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub degree: u32,
    pub terms: usize,
    pub coeff: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { degree: 2, terms: 3, coeff: 3 }
    }
}

/// Deterministic sample generator.
pub struct Sampler {
    rng: ChaCha8Rng,
    pub n: usize,
    pub bounds: Bounds,
}

impl Sampler {
    pub fn new(seed: u64, n: usize) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), n, bounds: Bounds::default() }
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    fn monomial(&mut self, degree: u32) -> Monomial {
        let mut e = [0u16; MAX_VARS];
        let d = self.rng.gen_range(0..=degree);
        for _ in 0..d {
            e[self.rng.gen_range(0..self.n)] += 1;
        }
        Monomial(e)
    }

    fn nonzero_coeff(&mut self) -> i64 {
        let c = self.bounds.coeff.max(1);
        let v = self.rng.gen_range(1..=c);
        if self.coin() {
            v
        } else {
            -v
        }
    }

    /// Polynomial with at most `terms` terms of degree at most `degree`.
    pub fn poly(&mut self) -> RatFunc {
        let t = self.rng.gen_range(0..=self.bounds.terms);
        let mut p = MultiPoly::zero();
        for _ in 0..t {
            let m = self.monomial(self.bounds.degree);
            let c = self.nonzero_coeff();
            p.add_term(m, num_rational::BigRational::from_integer(c.into()));
        }
        RatFunc::from_poly(p)
    }

    /// Like [`poly`](Self::poly) but never zero.
    pub fn nonzero_poly(&mut self) -> RatFunc {
        loop {
            let p = self.poly();
            if !p.is_zero() {
                return p;
            }
        }
    }

    pub fn vector(&mut self) -> VectorField {
        VectorField::new((0..self.n).map(|_| self.poly()).collect())
    }

    /// Homogeneous `p`-form with at most `terms` basis terms.
    pub fn form(&mut self, p: usize) -> DiffForm {
        let bases: Vec<u32> = (0u32..(1 << self.n)).filter(|&b| basis_degree(b) == p).collect();
        let mut out = DiffForm::zero(self.n);
        if bases.is_empty() {
            return out;
        }
        let t = self.rng.gen_range(1..=self.bounds.terms.max(1));
        for _ in 0..t {
            let b = bases[self.index(bases.len())];
            let f = self.poly();
            out.add_term(b, f);
        }
        out
    }

    /// Degree-`p` matrix form of rank `r` with sparse random entries.
    pub fn matrix_form(&mut self, r: usize, p: usize) -> MatrixForm {
        let entries = (0..r * r).map(|_| if self.coin() { self.form(p) } else { DiffForm::zero(self.n) }).collect();
        MatrixForm::from_entries(self.n, r, p, entries).expect("homogeneous entries")
    }

    /// Degree-0 matrix with polynomial entries.
    pub fn matrix(&mut self, r: usize) -> MatrixForm {
        self.matrix_form(r, 0)
    }
}
