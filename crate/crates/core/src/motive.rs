//! The coefficient ring of every computation: exact rational functions in
//! `v = L^(1/2)` over the integers, i.e. the field of fractions of `Z[v]`
//! restricted in practice to the localization Z[v, v^-1, (v^2n - 1)^-1].
//!
//! A motive is kept in canonical form at all times: numerator and denominator
//! are integer polynomials with gcd 1 (polynomial factors and integer
//! contents both reduced) and the denominator has a positive leading
//! coefficient. Equality of motives is therefore structural equality.
//!
//! The Adams operation psi_n is the ring endomorphism v -> (-1)^(n+1) v^n,
//! so L = v^2 maps to L^n while sigma^n(L^(1/2)) = 0 for n >= 2 holds.

use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MotiveError {
    #[error("division by zero motive")]
    DivisionByZero,
    #[error("pole at v = {0}")]
    Pole(BigRational),
    #[error("pole at v = -1 (no finite Euler specialization)")]
    PoleAtMinusOne,
    #[error("motive is not integral in L (odd powers of v remain)")]
    NotIntegralInL,
    #[error("invalid Grassmannian parameters (k = {k}, n = {n})")]
    InvalidGrassmannian { k: u32, n: u32 },
    #[error("cannot parse motive: {0}")]
    Parse(String),
}

/// An element of the motive ring, a canonical fraction of polynomials in v.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Motive {
    num: IntPoly,
    den: IntPoly,
}

impl Motive {
    fn canonical(num: IntPoly, den: IntPoly) -> Motive {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Motive {
                num: IntPoly::zero(),
                den: IntPoly::one(),
            };
        }
        let g = IntPoly::gcd(&num, &den);
        let mut num = num.checked_div(&g).expect("gcd divides numerator");
        let mut den = den.checked_div(&g).expect("gcd divides denominator");
        if den.leading().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Motive { num, den }
    }

    pub fn zero() -> Motive {
        Motive {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Motive {
        Motive {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Motive {
        Motive {
            num: IntPoly::constant(BigInt::from(n)),
            den: IntPoly::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Motive {
        Motive::canonical(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
    }

    /// The polynomial sum c_0 + c_1 v + c_2 v^2 + ...
    pub fn polynomial(coeffs: &[i64]) -> Motive {
        Motive {
            num: IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect()),
            den: IntPoly::one(),
        }
    }

    /// A fraction of two coefficient lists, canonicalized. Errors when the
    /// denominator is identically zero.
    pub fn fraction(num: &[i64], den: &[i64]) -> Result<Motive, MotiveError> {
        let d = IntPoly::new(den.iter().map(|&c| BigInt::from(c)).collect());
        if d.is_zero() {
            return Err(MotiveError::DivisionByZero);
        }
        let n = IntPoly::new(num.iter().map(|&c| BigInt::from(c)).collect());
        Ok(Motive::canonical(n, d))
    }

    /// L^k (half = false) or L^(k/2) = v^k (half = true); k may be negative.
    pub fn lefschetz_pow(k: i64, half: bool) -> Motive {
        let e = if half { k } else { 2 * k };
        if e >= 0 {
            Motive {
                num: IntPoly::monomial(BigInt::one(), e as usize),
                den: IntPoly::one(),
            }
        } else {
            Motive {
                num: IntPoly::one(),
                den: IntPoly::monomial(BigInt::one(), (-e) as usize),
            }
        }
    }

    /// The Lefschetz class L = [A^1] = v^2.
    pub fn lefschetz() -> Motive {
        Motive::lefschetz_pow(1, false)
    }

    /// v = L^(1/2).
    pub fn v() -> Motive {
        Motive::lefschetz_pow(1, true)
    }

    /// [Gl(n)] = prod_{i=0}^{n-1} (L^n - L^i).
    pub fn class_gl(n: u32) -> Motive {
        let mut acc = IntPoly::one();
        for i in 0..n {
            let f = IntPoly::monomial(BigInt::one(), 2 * n as usize)
                .sub(&IntPoly::monomial(BigInt::one(), 2 * i as usize));
            acc = acc.mul(&f);
        }
        Motive {
            num: acc,
            den: IntPoly::one(),
        }
    }

    /// [P^n] = L^n + ... + L + 1.
    pub fn class_proj(n: u32) -> Motive {
        let mut coeffs = vec![BigInt::zero(); 2 * n as usize + 1];
        for k in 0..=n as usize {
            coeffs[2 * k] = BigInt::one();
        }
        Motive {
            num: IntPoly::new(coeffs),
            den: IntPoly::one(),
        }
    }

    /// [A^n] = L^n.
    pub fn class_affine(n: u32) -> Motive {
        Motive::lefschetz_pow(n as i64, false)
    }

    /// [Gr(k,n)] = [Gl(n)] / ([Gl(k)] [Gl(n-k)] L^(k(n-k))), the Gaussian
    /// binomial coefficient in L.
    pub fn class_grassmannian(k: u32, n: u32) -> Result<Motive, MotiveError> {
        if k > n {
            return Err(MotiveError::InvalidGrassmannian { k, n });
        }
        let den = Motive::class_gl(k)
            .mul(&Motive::class_gl(n - k))
            .mul(&Motive::class_affine(k * (n - k)));
        Motive::class_gl(n).try_div(&den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, rhs: &Motive) -> Motive {
        Motive::canonical(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &Motive) -> Motive {
        Motive::canonical(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn neg(&self) -> Motive {
        Motive {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Motive) -> Motive {
        if self.is_zero() || rhs.is_zero() {
            return Motive::zero();
        }
        // cross-cancel before multiplying to keep the gcd work small
        let g1 = IntPoly::gcd(&self.num, &rhs.den);
        let g2 = IntPoly::gcd(&rhs.num, &self.den);
        let n1 = self.num.checked_div(&g1).unwrap();
        let d2 = rhs.den.checked_div(&g1).unwrap();
        let n2 = rhs.num.checked_div(&g2).unwrap();
        let d1 = self.den.checked_div(&g2).unwrap();
        Motive::canonical(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn try_div(&self, rhs: &Motive) -> Result<Motive, MotiveError> {
        if rhs.is_zero() {
            return Err(MotiveError::DivisionByZero);
        }
        Ok(self.mul(&Motive {
            num: rhs.den.clone(),
            den: rhs.num.clone(),
        }))
    }

    pub fn inverse(&self) -> Result<Motive, MotiveError> {
        Motive::one().try_div(self)
    }

    pub fn pow(&self, k: u32) -> Motive {
        let mut acc = Motive::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The Adams operation psi_n, the ring endomorphism v -> (-1)^(n+1) v^n.
    /// On stacky denominators this realizes [Gl(m)] -> P_m(L^n).
    pub fn adams(&self, n: u32) -> Motive {
        assert!(n >= 1, "Adams operations are indexed by n >= 1");
        if n == 1 {
            return self.clone();
        }
        Motive::canonical(self.num.adams_subst(n), self.den.adams_subst(n))
    }

    /// The limit v -> -1, the Euler-characteristic specialization. Common
    /// (v+1)-factors are cancelled before evaluating; a genuine pole is an
    /// error.
    pub fn euler_specialize(&self) -> Result<BigRational, MotiveError> {
        let minus_one = -BigRational::one();
        let v_plus_1 = IntPoly::new(vec![BigInt::one(), BigInt::one()]);
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        loop {
            let d = den.eval(&minus_one);
            if !d.is_zero() {
                return Ok(num.eval(&minus_one) / d);
            }
            if !num.eval(&minus_one).is_zero() {
                return Err(MotiveError::PoleAtMinusOne);
            }
            num = num.checked_div(&v_plus_1).expect("root at -1");
            den = den.checked_div(&v_plus_1).expect("root at -1");
        }
    }

    /// Exact evaluation at v = v0.
    pub fn eval_at(&self, v0: &BigRational) -> Result<BigRational, MotiveError> {
        let d = self.den.eval(v0);
        if d.is_zero() {
            return Err(MotiveError::Pole(v0.clone()));
        }
        Ok(self.num.eval(v0) / d)
    }

    /// True iff the motive lies in Z(L): only even v-powers remain after
    /// canonicalization. Required before finite-field comparisons.
    pub fn is_integral_in_l(&self) -> bool {
        self.num.has_even_exponents_only() && self.den.has_even_exponents_only()
    }

    /// Exact evaluation at L = q (so v^2 = q). Errors when odd v-powers
    /// survive or the denominator vanishes.
    pub fn eval_at_l(&self, q: &BigRational) -> Result<BigRational, MotiveError> {
        if !self.is_integral_in_l() {
            return Err(MotiveError::NotIntegralInL);
        }
        let d = self.den.as_lefschetz_poly().eval(q);
        if d.is_zero() {
            return Err(MotiveError::Pole(q.clone()));
        }
        Ok(self.num.as_lefschetz_poly().eval(q) / d)
    }

    /// True iff no integer factor is left in the denominator, i.e. the
    /// denominator is primitive. Coefficients produced by plethystic
    /// exponentials of integral series must satisfy this: the transient
    /// rationals have to cancel.
    pub fn denominator_is_primitive(&self) -> bool {
        self.den.content().is_one()
    }
}

impl std::fmt::Display for Motive {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Serialize for Motive {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Motive {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Parsing. Accepts full +,-,*,/,^ expressions over integers, "v" and the
// sugar "L" for v^2, e.g. "(L^2-1)*(L^2-L)" or "(v^3 - v)/(v^2 - 1)".
// ---------------------------------------------------------------------------

impl std::str::FromStr for Motive {
    type Err = MotiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            input: s.as_bytes(),
            pos: 0,
        };
        let m = p.expr()?;
        p.skip_ws();
        if p.pos != p.input.len() {
            return Err(MotiveError::Parse(format!(
                "unexpected trailing input at byte {}",
                p.pos
            )));
        }
        Ok(m)
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Motive, MotiveError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Motive, MotiveError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = acc.try_div(&self.factor()?)?;
                }
                // juxtaposition like "2v^3" counts as multiplication
                Some(c) if c == b'v' || c == b'L' || c == b'(' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Motive, MotiveError> {
        let mut negate = false;
        while let Some(c) = self.peek() {
            match c {
                b'-' => {
                    negate = !negate;
                    self.pos += 1;
                }
                b'+' => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let mut base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            base = base.pow(e);
        }
        Ok(if negate { base.neg() } else { base })
    }

    fn atom(&mut self) -> Result<Motive, MotiveError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let m = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(MotiveError::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(m)
            }
            Some(b'v') => {
                self.pos += 1;
                Ok(Motive::v())
            }
            Some(b'L') => {
                self.pos += 1;
                Ok(Motive::lefschetz())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
                let n: BigInt = text
                    .parse()
                    .map_err(|_| MotiveError::Parse(format!("bad integer '{}'", text)))?;
                Ok(Motive {
                    num: IntPoly::constant(n),
                    den: IntPoly::one(),
                })
            }
            other => Err(MotiveError::Parse(format!(
                "unexpected token {:?} at byte {}",
                other.map(|c| c as char),
                self.pos
            ))),
        }
    }

    fn uint(&mut self) -> Result<u32, MotiveError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                std::str::from_utf8(&self.input[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| MotiveError::Parse("exponent too large".into()))
            }
            _ => Err(MotiveError::Parse("expected a nonnegative exponent".into())),
        }
    }
}
