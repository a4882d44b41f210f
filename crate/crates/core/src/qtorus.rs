//! Truncated power series graded by dimension vectors with motive
//! coefficients: the quantum torus.
//!
//! Series carry their quiver (for the antisymmetrized Euler form twisting
//! the quantum product) and a truncation bound N on the total degree.
//! The plethystic exponential is
//!
//!   Exp(a) = exp( sum_{n >= 1} psi_n(a) / n ),
//!
//! where psi_n applies the Adams operation to every coefficient and places
//! the result at grade n*d. Its inverse, the plethystic logarithm, is
//! computed grade by grade through the Sym recursion
//!
//!   a_d = b_d - sum over nontrivial decompositions  prod_j Sym^(n_j)(a_(e_j)).
//!
//! The ordered slope factorization splits a series with unit constant term
//! into the unique family of ray-supported factors whose quantum product in
//! strictly decreasing slope order recomposes the input.

use crate::motive::Motive;
use crate::quiver::{DimVector, Quiver};
use crate::stability::{CentralCharge, SlopeKey};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("plethystic exponential requires a vanishing constant term")]
    NonzeroConstantTerm,
    #[error("constant term must be 1")]
    ConstantTermNotOne,
    #[error("constant term is not invertible")]
    NonInvertibleConstant,
}

/// An element of Motive[[t_i : i in Q_0]] truncated at total degree N.
/// Absent coefficients are zero; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct GradedSeries {
    quiver: Arc<Quiver>,
    bound: u32,
    coeffs: BTreeMap<DimVector, Motive>,
}

impl PartialEq for GradedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
            && self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver)
    }
}

impl Eq for GradedSeries {}

impl GradedSeries {
    pub fn zero(quiver: Arc<Quiver>, bound: u32) -> GradedSeries {
        GradedSeries {
            quiver,
            bound,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(quiver: Arc<Quiver>, bound: u32) -> GradedSeries {
        let mut s = GradedSeries::zero(quiver, bound);
        s.set_coeff(DimVector::zero(s.quiver.vertex_count()), Motive::one());
        s
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn coeff(&self, d: &DimVector) -> Motive {
        self.coeffs.get(d).cloned().unwrap_or_else(Motive::zero)
    }

    pub fn set_coeff(&mut self, d: DimVector, m: Motive) {
        assert_eq!(d.len(), self.quiver.vertex_count(), "grade length mismatch");
        if d.total() > self.bound {
            return;
        }
        if m.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, m);
        }
    }

    /// Nonzero coefficients in (total degree, lex) order.
    pub fn support(&self) -> impl Iterator<Item = (&DimVector, &Motive)> {
        self.coeffs.iter()
    }

    pub fn constant_term(&self) -> Motive {
        self.coeff(&DimVector::zero(self.quiver.vertex_count()))
    }

    fn assert_compatible(&self, other: &GradedSeries) {
        assert_eq!(self.bound, other.bound, "series truncation mismatch");
        assert!(
            Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver,
            "series over different quivers"
        );
    }

    pub fn add(&self, rhs: &GradedSeries) -> GradedSeries {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (d, m) in &rhs.coeffs {
            out.set_coeff(d.clone(), out.coeff(d).add(m));
        }
        out
    }

    pub fn sub(&self, rhs: &GradedSeries) -> GradedSeries {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (d, m) in &rhs.coeffs {
            out.set_coeff(d.clone(), out.coeff(d).sub(m));
        }
        out
    }

    pub fn scale(&self, c: &Motive) -> GradedSeries {
        let mut out = GradedSeries::zero(self.quiver.clone(), self.bound);
        for (d, m) in &self.coeffs {
            out.set_coeff(d.clone(), m.mul(c));
        }
        out
    }

    /// Commutative convolution: c_d = sum_{d' + d'' = d} a_(d') b_(d'').
    pub fn mul(&self, rhs: &GradedSeries) -> GradedSeries {
        self.assert_compatible(rhs);
        let mut acc: BTreeMap<DimVector, Motive> = BTreeMap::new();
        for (d1, m1) in &self.coeffs {
            for (d2, m2) in &rhs.coeffs {
                if d1.total() + d2.total() > self.bound {
                    continue;
                }
                let d = d1.add(d2);
                let term = m1.mul(m2);
                match acc.get_mut(&d) {
                    Some(cur) => *cur = cur.add(&term),
                    None => {
                        acc.insert(d, term);
                    }
                }
            }
        }
        acc.retain(|_, m| !m.is_zero());
        GradedSeries {
            quiver: self.quiver.clone(),
            bound: self.bound,
            coeffs: acc,
        }
    }

    /// Quantum (twisted) product:
    /// c_(d'') = sum_{d' + e = d''} L^(<d', e>/2) a_(d') b_e,
    /// the left factor's grade first in the twist.
    pub fn mul_quantum(&self, rhs: &GradedSeries) -> GradedSeries {
        self.assert_compatible(rhs);
        let mut acc: BTreeMap<DimVector, Motive> = BTreeMap::new();
        for (d1, m1) in &self.coeffs {
            for (d2, m2) in &rhs.coeffs {
                if d1.total() + d2.total() > self.bound {
                    continue;
                }
                let twist = Motive::lefschetz_pow(self.quiver.antisym_form(d1, d2).unwrap(), true);
                let d = d1.add(d2);
                let term = twist.mul(&m1.mul(m2));
                match acc.get_mut(&d) {
                    Some(cur) => *cur = cur.add(&term),
                    None => {
                        acc.insert(d, term);
                    }
                }
            }
        }
        acc.retain(|_, m| !m.is_zero());
        GradedSeries {
            quiver: self.quiver.clone(),
            bound: self.bound,
            coeffs: acc,
        }
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn invert(&self) -> Result<GradedSeries, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NonInvertibleConstant);
        }
        let c0_inv = c0.inverse().unwrap();
        let nv = self.quiver.vertex_count();
        let mut out = GradedSeries::zero(self.quiver.clone(), self.bound);
        out.set_coeff(DimVector::zero(nv), c0_inv.clone());
        for d in DimVector::all_up_to(nv, self.bound) {
            let mut s = Motive::zero();
            for (e, a) in &self.coeffs {
                if e.is_zero() {
                    continue;
                }
                if let Some(rest) = d.checked_sub(e) {
                    s = s.add(&a.mul(&out.coeff(&rest)));
                }
            }
            // 0 = sum_{e <= d} a_e c_(d-e) = a_0 c_d + s for d != 0
            let cd = s.mul(&c0_inv).neg();
            out.set_coeff(d, cd);
        }
        Ok(out)
    }

    /// The substitution t_i -> L^(k w_i) t_i: the coefficient at d picks up
    /// L^(k (w . d)).
    pub fn dilate_weighted(&self, k: i64, weights: &[i64]) -> GradedSeries {
        assert_eq!(weights.len(), self.quiver.vertex_count());
        let mut out = GradedSeries::zero(self.quiver.clone(), self.bound);
        for (d, m) in &self.coeffs {
            let wd: i64 = weights
                .iter()
                .zip(d.entries())
                .map(|(&w, &x)| w * x as i64)
                .sum();
            out.set_coeff(d.clone(), m.mul(&Motive::lefschetz_pow(k * wd, false)));
        }
        out
    }

    /// t -> L^k t on every variable: the coefficient at d picks up L^(k |d|).
    pub fn dilate(&self, k: i64) -> GradedSeries {
        let w = vec![1i64; self.quiver.vertex_count()];
        self.dilate_weighted(k, &w)
    }

    /// Multiply by the monomial t^(d0); grades beyond the bound fall off.
    pub fn shift(&self, d0: &DimVector) -> GradedSeries {
        let mut out = GradedSeries::zero(self.quiver.clone(), self.bound);
        for (d, m) in &self.coeffs {
            let e = d.add(d0);
            if e.total() <= self.bound {
                out.set_coeff(e, m.clone());
            }
        }
        out
    }

    /// Adams transport: coefficients move to grade n*d and pass through
    /// psi_n.
    fn adams_layer(&self, n: u32) -> GradedSeries {
        let mut out = GradedSeries::zero(self.quiver.clone(), self.bound);
        for (d, m) in &self.coeffs {
            if n * d.total() > self.bound {
                continue;
            }
            out.set_coeff(d.scale(n), m.adams(n));
        }
        out
    }

    /// The plethystic exponential Sym. Requires vanishing constant term;
    /// the result has constant term 1. Transient rational coefficients are
    /// exact and cancel back into the motive ring for integral inputs.
    pub fn pleth_exp(&self) -> Result<GradedSeries, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        // b = sum_{n >= 1} psi_n(self)/n
        let mut b = GradedSeries::zero(self.quiver.clone(), self.bound);
        for n in 1..=self.bound.max(1) {
            let layer = self.adams_layer(n);
            if layer.coeffs.is_empty() {
                continue;
            }
            let inv_n = Motive::from_rational(&BigRational::new(BigInt::one(), BigInt::from(n)));
            b = b.add(&layer.scale(&inv_n));
        }
        // exp(b) = sum_k b^k / k!
        let mut acc = GradedSeries::one(self.quiver.clone(), self.bound);
        let mut power = GradedSeries::one(self.quiver.clone(), self.bound);
        for k in 1..=self.bound {
            let inv_k = Motive::from_rational(&BigRational::new(BigInt::one(), BigInt::from(k)));
            power = power.mul(&b).scale(&inv_k);
            if power.coeffs.is_empty() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc)
    }

    /// The plethystic logarithm: the unique a with vanishing constant term
    /// and Exp(a) = self, obtained by the grade-by-grade Sym recursion.
    pub fn pleth_log(&self) -> Result<GradedSeries, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let nv = self.quiver.vertex_count();
        let mut a = GradedSeries::zero(self.quiver.clone(), self.bound);
        let mut sym_cache: HashMap<(DimVector, u32), Motive> = HashMap::new();
        for d in DimVector::all_up_to(nv, self.bound) {
            let mut s = Motive::zero();
            for partition in multi_partitions(&d) {
                if partition.len() == 1 && partition[0].1 == 1 {
                    continue; // the trivial decomposition is the unknown itself
                }
                let mut prod = Motive::one();
                for (e, mult) in &partition {
                    let x = a.coeff(e);
                    if x.is_zero() {
                        prod = Motive::zero();
                        break;
                    }
                    let key = (e.clone(), *mult);
                    let sym = sym_cache
                        .entry(key)
                        .or_insert_with(|| sym_power(&x, *mult))
                        .clone();
                    prod = prod.mul(&sym);
                }
                s = s.add(&prod);
            }
            a.set_coeff(d.clone(), self.coeff(&d).sub(&s));
        }
        Ok(a)
    }

    /// Ordered factorization into slope sectors: the unique family of
    /// ray-supported series with unit constant term whose quantum product
    /// over strictly decreasing slopes equals self. Returned in product
    /// order (decreasing slope).
    pub fn factorize_by_slope(
        &self,
        charge: &CentralCharge,
    ) -> Result<Vec<(SlopeKey, GradedSeries)>, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let nv = self.quiver.vertex_count();
        assert_eq!(charge.len(), nv, "charge/quiver vertex count mismatch");
        // nonzero sector entries grouped by ray, keys in decreasing order
        let mut rays: BTreeMap<std::cmp::Reverse<SlopeKey>, BTreeMap<DimVector, Motive>> =
            BTreeMap::new();
        for d in DimVector::all_up_to(nv, self.bound) {
            let correction = self.hn_correction(&rays, &d);
            let s = self.coeff(&d).sub(&correction);
            if !s.is_zero() {
                rays.entry(std::cmp::Reverse(charge.slope_key(&d)))
                    .or_default()
                    .insert(d, s);
            }
        }
        let mut out = Vec::with_capacity(rays.len());
        for (std::cmp::Reverse(key), entries) in rays {
            let mut series = GradedSeries::one(self.quiver.clone(), self.bound);
            for (d, m) in entries {
                series.set_coeff(d, m);
            }
            out.push((key, series));
        }
        Ok(out)
    }

    /// Sum over ordered decompositions d = d1 + ... + dr (r >= 2, slope keys
    /// strictly decreasing, parts nonzero in their ray) of the twisted
    /// product of known sector coefficients.
    fn hn_correction(
        &self,
        rays: &BTreeMap<std::cmp::Reverse<SlopeKey>, BTreeMap<DimVector, Motive>>,
        d: &DimVector,
    ) -> Motive {
        let keys: Vec<SlopeKey> = rays.keys().map(|r| r.0.clone()).collect();
        let mut total = Motive::zero();
        self.walk_decompositions(
            rays,
            &keys,
            0,
            d,
            &DimVector::zero(d.len()),
            0,
            &Motive::one(),
            &mut total,
        );
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_decompositions(
        &self,
        rays: &BTreeMap<std::cmp::Reverse<SlopeKey>, BTreeMap<DimVector, Motive>>,
        keys: &[SlopeKey],
        start: usize,
        remaining: &DimVector,
        chosen_sum: &DimVector,
        depth: usize,
        acc: &Motive,
        total: &mut Motive,
    ) {
        for (idx, key) in keys.iter().enumerate().skip(start) {
            let entries = &rays[&std::cmp::Reverse(key.clone())];
            for (e, m) in entries {
                let Some(rest) = remaining.checked_sub(e) else {
                    continue;
                };
                // the pairwise twist of an ordered product accumulates as
                // <sum chosen so far, next part>
                let twist_exp = self.quiver.antisym_form(chosen_sum, e).unwrap();
                let term = acc.mul(m).mul(&Motive::lefschetz_pow(twist_exp, true));
                if rest.is_zero() {
                    if depth + 1 >= 2 {
                        *total = total.add(&term);
                    }
                } else {
                    self.walk_decompositions(
                        rays,
                        keys,
                        idx + 1,
                        &rest,
                        &chosen_sum.add(e),
                        depth + 1,
                        &term,
                        total,
                    );
                }
            }
        }
    }
}

/// sigma^n of a single motive through the Newton recursion
/// n sigma^n = sum_{k=1..n} psi_k(x) sigma^(n-k).
pub(crate) fn sym_power(x: &Motive, n: u32) -> Motive {
    let mut sigma = vec![Motive::one()];
    for j in 1..=n {
        let mut s = Motive::zero();
        for k in 1..=j {
            s = s.add(&x.adams(k).mul(&sigma[(j - k) as usize]));
        }
        let inv_j = Motive::from_rational(&BigRational::new(BigInt::one(), BigInt::from(j)));
        sigma.push(s.mul(&inv_j));
    }
    sigma.pop().unwrap()
}

/// All multisets of nonzero dimension vectors summing to d, as
/// (part, multiplicity) lists. Includes the trivial multiset {d}.
fn multi_partitions(d: &DimVector) -> Vec<Vec<(DimVector, u32)>> {
    let mut candidates: Vec<DimVector> = Vec::new();
    fn gen(cur: &mut Vec<u32>, i: usize, d: &[u32], out: &mut Vec<DimVector>) {
        if i == d.len() {
            let v = DimVector(cur.clone());
            if !v.is_zero() {
                out.push(v);
            }
            return;
        }
        for x in 0..=d[i] {
            cur.push(x);
            gen(cur, i + 1, d, out);
            cur.pop();
        }
    }
    gen(&mut Vec::new(), 0, d.entries(), &mut candidates);
    // largest first so each multiset is generated once, parts non-increasing
    candidates.sort();
    candidates.reverse();

    let mut out = Vec::new();
    fn rec(
        candidates: &[DimVector],
        idx: usize,
        remaining: &DimVector,
        current: &mut Vec<DimVector>,
        out: &mut Vec<Vec<(DimVector, u32)>>,
    ) {
        if remaining.is_zero() {
            let mut grouped: Vec<(DimVector, u32)> = Vec::new();
            for part in current.iter() {
                match grouped.last_mut() {
                    Some((p, n)) if p == part => *n += 1,
                    _ => grouped.push((part.clone(), 1)),
                }
            }
            out.push(grouped);
            return;
        }
        for i in idx..candidates.len() {
            if let Some(rest) = remaining.checked_sub(&candidates[i]) {
                current.push(candidates[i].clone());
                rec(candidates, i, &rest, current, out);
                current.pop();
            }
        }
    }
    rec(&candidates, 0, d, &mut Vec::new(), &mut out);
    out
}
