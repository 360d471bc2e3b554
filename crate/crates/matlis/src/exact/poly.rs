//! Univariate polynomials over ℚ, coefficients lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{common_denominator, Rat};

/// Trimmed coefficient vector: the last entry is nonzero, the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_ints(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Poly {
        Poly(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Rat, k: usize) -> Poly {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `x − a`.
    pub fn linear(a: &Rat) -> Poly {
        Poly(vec![-a, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.0.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    /// Leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lead().is_one() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rat::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    pub fn eval(&self, a: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| &(&acc * a) + c)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * &Rat::int(i as i64)).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lead().recip();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Exact quotient; panics when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        (self * other).div_exact(&self.gcd(other)).monic()
    }

    /// Multiplicity of the root `a`; `usize::MAX` for the zero polynomial.
    pub fn valuation_at(&self, a: &Rat) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::linear(a);
        let mut p = self.clone();
        let mut v = 0;
        loop {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                return v;
            }
            p = q;
            v += 1;
        }
    }

    /// Power of `x` dividing `self`; `usize::MAX` for zero.
    pub fn x_valuation(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).unwrap_or(usize::MAX)
    }

    /// `p(t + a)` as a polynomial in `t`.
    pub fn taylor_shift(&self, a: &Rat) -> Poly {
        let mut out = Poly::zero();
        let lin = Poly(vec![a.clone(), Rat::one()]);
        for c in self.0.iter().rev() {
            out = &(&out * &lin) + &Poly::constant(c.clone());
        }
        out
    }

    /// The first `n` coefficients of `1/self` as a power series; the constant term must be nonzero.
    pub fn series_inverse(&self, n: usize) -> Vec<Rat> {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "series inverse of a non-unit");
        let inv0 = c0.recip();
        let mut out: Vec<Rat> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 { Rat::one() } else { Rat::zero() };
            for j in 1..=k.min(self.0.len().saturating_sub(1)) {
                acc -= &self.0[j] * &out[k - j];
            }
            out.push(&acc * &inv0);
        }
        out
    }

    /// Integer polynomial with the same roots (denominators cleared, content removed).
    fn primitive_integer(&self) -> Vec<BigInt> {
        let den = common_denominator(self.0.iter());
        let ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// All rational roots with multiplicity, or `None` when the candidate set is too
    /// large to enumerate (coefficients beyond 10¹⁴ after clearing denominators).
    pub fn rational_roots(&self) -> Option<Vec<(Rat, usize)>> {
        if self.is_constant() {
            return Some(Vec::new());
        }
        let mut roots = Vec::new();
        let v = self.x_valuation();
        let mut p = Poly::new(self.0[v..].to_vec());
        if v > 0 {
            roots.push((Rat::zero(), v));
        }
        if p.is_constant() {
            return Some(roots);
        }
        let sq = p.div_exact(&p.gcd(&p.derivative()));
        let ints = sq.primitive_integer();
        let a0 = divisors(ints[0].abs().to_u64()?)?;
        let an = divisors(ints.last().unwrap().abs().to_u64()?)?;
        let mut cands: Vec<Rat> = Vec::new();
        for num in &a0 {
            for den in &an {
                let r = Rat::new(*num as i64, *den as i64);
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            if sq.eval(&c).is_zero() {
                let m = p.valuation_at(&c);
                p = p.div_exact(&Poly::linear(&c).pow(m));
                roots.push((c, m));
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Some(roots)
    }
}

fn divisors(n: u64) -> Option<Vec<u64>> {
    if n > 100_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rat::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_poly {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_poly!(Add, add);
forward_poly!(Sub, sub);
forward_poly!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Poly, D::Error> {
        Ok(Poly::new(Vec::<Rat>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[0, 0]), Poly::zero());
    }

    #[test]
    fn gcd_is_monic() {
        let a = &p(&[0, 1]) * &p(&[-1, 1]);
        let b = &p(&[0, 2]) * &p(&[3, 1]);
        assert_eq!(a.gcd(&b), Poly::x());
        assert_eq!(Poly::zero().gcd(&p(&[2])), Poly::one());
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (2x − 1)² (x + 3) x (x² + 1)
        let f = &(&(&p(&[-1, 2]).pow(2) * &p(&[3, 1])) * &Poly::x()) * &p(&[1, 0, 1]);
        let roots = f.rational_roots().unwrap();
        assert_eq!(roots, vec![(Rat::int(-3), 1), (Rat::zero(), 1), (Rat::new(1, 2), 2)]);
        assert_eq!(p(&[-2, 0, 1]).rational_roots().unwrap(), vec![]);
    }

    #[test]
    fn taylor_shift_and_series() {
        // (x − 2)³ shifted by 2 is t³.
        let f = p(&[-2, 1]).pow(3);
        assert_eq!(f.taylor_shift(&Rat::int(2)), Poly::monomial(Rat::one(), 3));
        // 1/(1 − t) = 1 + t + t² + …
        assert_eq!(p(&[1, -1]).series_inverse(4), vec![Rat::one(); 4]);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 3]).to_string(), "3x^2 - 1");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(serde_json::to_string(&p(&[0, 1])).unwrap(), r#"["0","1"]"#);
    }

    fn poly_strategy() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-5i64..=5, 0..5).prop_map(|v| Poly::from_ints(&v))
    }

    proptest! {
        #[test]
        fn division_identity(a in poly_strategy(), b in poly_strategy()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree() || r.is_zero());
        }

        #[test]
        fn gcd_divides_both(a in poly_strategy(), b in poly_strategy()) {
            let g = a.gcd(&b);
            prop_assert!(g.divides(&a) && g.divides(&b));
        }
    }
}
