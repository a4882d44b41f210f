//! Rational central charges in the extended upper half plane and exact
//! slope comparison.
//!
//! The slope -cot(arg Z(d)) is never materialized as a number; ordering by
//! slope equals ordering by argument, which is decided by the exact sign of
//! a cross product of rational charge components. Two dimension vectors get
//! the same key iff their charges span the same ray.

use crate::quiver::{DimVector, Quiver};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    #[error("charge component {index} = {value} lies outside the upper half plane")]
    OutsideUpperHalfPlane { index: usize, value: String },
    #[error("charge has {got} components, quiver has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
}

/// One rational point a + b i of H+ = { r e^(i phi) : r >= 0, phi in (0, pi] } \ {0}
/// per vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CentralCharge {
    parts: Vec<(BigRational, BigRational)>,
}

impl CentralCharge {
    pub fn new(parts: Vec<(BigRational, BigRational)>) -> Result<CentralCharge, StabilityError> {
        for (i, (re, im)) in parts.iter().enumerate() {
            let ok = im.is_positive() || (im.is_zero() && re.is_negative());
            if !ok {
                return Err(StabilityError::OutsideUpperHalfPlane {
                    index: i,
                    value: format!("{} + {} i", re, im),
                });
            }
        }
        Ok(CentralCharge { parts })
    }

    /// The King charge zeta_i = -theta_i + i.
    pub fn from_theta(theta: &[BigRational]) -> CentralCharge {
        CentralCharge {
            parts: theta
                .iter()
                .map(|t| (-t.clone(), BigRational::one()))
                .collect(),
        }
    }

    pub fn from_theta_ints(theta: &[i64]) -> CentralCharge {
        CentralCharge::from_theta(
            &theta
                .iter()
                .map(|&t| BigRational::from_integer(t.into()))
                .collect::<Vec<_>>(),
        )
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[(BigRational, BigRational)] {
        &self.parts
    }

    /// Z(d) = sum_i zeta_i d_i as a rational complex pair. Lands in H+ for
    /// d != 0 by convexity.
    pub fn charge(&self, d: &DimVector) -> (BigRational, BigRational) {
        assert_eq!(
            self.parts.len(),
            d.len(),
            "charge/dimension length mismatch"
        );
        assert!(!d.is_zero(), "charge of the zero dimension vector");
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        for ((a, b), &k) in self.parts.iter().zip(d.entries()) {
            if k == 0 {
                continue;
            }
            let k = BigRational::from_integer(k.into());
            re += a * &k;
            im += b * &k;
        }
        (re, im)
    }

    /// The ray of Z(d) in H+ as a primitive integer direction.
    pub fn slope_key(&self, d: &DimVector) -> SlopeKey {
        let (re, im) = self.charge(d);
        SlopeKey::from_ray(&re, &im)
    }

    pub fn slope_compare(&self, d: &DimVector, e: &DimVector) -> Ordering {
        self.slope_key(d).cmp(&self.slope_key(e))
    }

    /// Bounded genericity check: true iff all pairs of nonzero dimension
    /// vectors with total degree at most `bound` and equal slope key have
    /// vanishing antisymmetrized Euler form. Genericity proper quantifies
    /// over all dimension vectors, so a bounded check is necessary-only;
    /// callers should report the bound alongside the answer.
    pub fn is_generic(&self, quiver: &Quiver, bound: u32) -> bool {
        assert!(bound >= 1);
        assert_eq!(self.parts.len(), quiver.vertex_count());
        let mut rays: HashMap<SlopeKey, Vec<DimVector>> = HashMap::new();
        for d in DimVector::all_up_to(quiver.vertex_count(), bound) {
            rays.entry(self.slope_key(&d)).or_default().push(d);
        }
        for group in rays.values() {
            for (i, d) in group.iter().enumerate() {
                for e in &group[i + 1..] {
                    if quiver.antisym_form(d, e).unwrap() != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A reduced rational direction (p, q), q >= 0, gcd(|p|, q) = 1, standing
/// for the ray of a charge in H+. The order is the argument order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SlopeKey {
    p: BigInt,
    q: BigInt,
}

impl SlopeKey {
    fn from_ray(re: &BigRational, im: &BigRational) -> SlopeKey {
        assert!(
            im.is_positive() || (im.is_zero() && re.is_negative()),
            "ray outside the upper half plane"
        );
        // clear denominators, then divide by the gcd
        let scale = re.denom().lcm(im.denom());
        let mut p = (re * BigRational::from_integer(scale.clone())).to_integer();
        let mut q = (im * BigRational::from_integer(scale)).to_integer();
        let g = p.gcd(&q);
        if !g.is_zero() && !g.is_one() {
            p /= &g;
            q /= &g;
        }
        SlopeKey { p, q }
    }
}

impl PartialOrd for SlopeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SlopeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // arg(self) < arg(other) iff p_s q_o - q_s p_o > 0 on H+
        let cross = &self.p * &other.q - &self.q * &other.p;
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }
}

impl std::fmt::Display for SlopeKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}:{})", self.p, self.q)
    }
}
