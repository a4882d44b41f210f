//! Dense univariate polynomials over the integers, the raw material of the
//! motive ring. Coefficients are arbitrary-precision; gcds use the primitive
//! pseudo-remainder sequence so canonical forms stay exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients stored in ascending degree, no trailing zeros; empty = 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// c * v^k
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        IntPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - rhs.coeff(k));
        }
        IntPoly::new(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by v^k.
    pub fn shift_up(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly::new(coeffs)
    }

    /// gcd of the coefficients, nonnegative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Exact division; None when `div` does not divide `self` over Z[v].
    pub fn checked_div(&self, div: &IntPoly) -> Option<IntPoly> {
        assert!(!div.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let dn = div.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let deg = self.degree().unwrap();
        if deg < dn {
            return None;
        }
        let lead = div.leading();
        let mut quot = vec![BigInt::zero(); deg - dn + 1];
        for k in (0..quot.len()).rev() {
            let r = rem[k + dn].clone();
            if r.is_zero() {
                continue;
            }
            let (q, s) = r.div_rem(&lead);
            if !s.is_zero() {
                return None;
            }
            for (j, b) in div.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    rem[k + j] -= &q * b;
                }
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(quot))
    }

    /// Pseudo-remainder of self by div: lc(div)^(deg-dn+1) * self mod div.
    fn pseudo_rem(&self, div: &IntPoly) -> IntPoly {
        let dn = div.degree().expect("pseudo_rem by zero");
        let lead = div.leading();
        let mut rem = self.clone();
        while let Some(deg) = rem.degree() {
            if deg < dn {
                break;
            }
            let r = rem.leading();
            rem = rem.mul_scalar(&lead);
            let t = div.mul_scalar(&r).shift_up(deg - dn);
            rem = rem.sub(&t);
            // cancellation of the top coefficient is exact by construction
            debug_assert!(rem.degree().is_none_or(|d| d < deg));
        }
        rem
    }

    /// Number of leading zero coefficients, i.e. the largest k with v^k
    /// dividing the polynomial. Zero for the zero polynomial.
    fn v_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    fn shift_down(&self, k: usize) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Full gcd over Z[v] (content included), normalized to a positive
    /// leading coefficient. Common v-powers split off up front; motives
    /// carry large monomial factors all the time and the remainder ladder
    /// must not walk them down one degree at a time.
    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.is_zero() {
            return b.abs_normalized();
        }
        if b.is_zero() {
            return a.abs_normalized();
        }
        let va = a.v_valuation();
        let vb = b.v_valuation();
        let shared = va.min(vb);
        let content = a.content().gcd(&b.content());
        let mut p = a.shift_down(va).primitive_part();
        let mut q = b.shift_down(vb).primitive_part();
        if p.degree() < q.degree() {
            std::mem::swap(&mut p, &mut q);
        }
        while !q.is_zero() {
            let r = p.pseudo_rem(&q).primitive_part();
            // strip the v-powers the remainder picked up; neither input is
            // divisible by v here, so the gcd is not either
            let r = r.shift_down(r.v_valuation());
            p = q;
            q = r;
        }
        p.abs_normalized().mul_scalar(&content).shift_up(shared)
    }

    fn abs_normalized(&self) -> IntPoly {
        if self.leading().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// The Adams substitution v -> (-1)^(n+1) v^n, a ring endomorphism.
    pub fn adams_subst(&self, n: u32) -> IntPoly {
        let n = n as usize;
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * n + 1];
        let flip = n.is_multiple_of(2);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out[k * n] = if flip && k % 2 == 1 { -c } else { c.clone() };
        }
        IntPoly::new(out)
    }

    pub fn has_even_exponents_only(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| k % 2 == 0 || c.is_zero())
    }

    /// Reads the polynomial as a polynomial in L = v^2. Requires even
    /// exponents only.
    pub fn as_lefschetz_poly(&self) -> IntPoly {
        debug_assert!(self.has_even_exponents_only());
        IntPoly::new(self.coeffs.iter().step_by(2).cloned().collect())
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{}*v", mag)?,
                (_, true) => write!(f, "v^{}", k)?,
                (_, false) => write!(f, "{}*v^{}", mag, k)?,
            }
        }
        Ok(())
    }
}
