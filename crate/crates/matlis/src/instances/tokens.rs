//! The token basis `Pow(m) = xᵐ`, `Pole(λ, n) = (x−λ)⁻ⁿ` of a localization of ℚ[x] at
//! finitely many points.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::InstanceError;
use crate::exact::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum SXToken {
    Pow { m: usize },
    Pole { lambda: Rat, n: usize },
}

/// A finite linear combination of tokens, without repeated or zero terms.
pub type Combo = Vec<(Rat, SXToken)>;

impl SXToken {
    pub fn pow(m: usize) -> SXToken {
        SXToken::Pow { m }
    }

    /// `Pole(λ, 0)` is `Pow(0)`.
    pub fn pole(lambda: Rat, n: usize) -> SXToken {
        if n == 0 {
            SXToken::Pow { m: 0 }
        } else {
            SXToken::Pole { lambda, n }
        }
    }

    /// The value of the rational function at `t`, `None` at a pole.
    pub fn eval(&self, t: &Rat) -> Option<Rat> {
        match self {
            SXToken::Pow { m } => Some(t.pow(*m as u32)),
            SXToken::Pole { lambda, n } => {
                let d = t - lambda;
                (!d.is_zero()).then(|| d.pow(*n as u32).recip())
            }
        }
    }
}

impl fmt::Display for SXToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SXToken::Pow { m } => write!(f, "x^{m}"),
            SXToken::Pole { lambda, n } => write!(f, "(x-{lambda})^-{n}"),
        }
    }
}

pub(crate) fn push(c: &mut Combo, coef: Rat, t: SXToken) {
    if coef.is_zero() {
        return;
    }
    if let Some(pos) = c.iter().position(|(_, u)| *u == t) {
        let v = &c[pos].0 + &coef;
        if v.is_zero() {
            c.remove(pos);
        } else {
            c[pos].0 = v;
        }
    } else {
        c.push((coef, t));
    }
}

/// `x·t`: `x·xᵐ = xᵐ⁺¹` and `x·(x−λ)⁻ⁿ = (x−λ)⁻⁽ⁿ⁻¹⁾ + λ(x−λ)⁻ⁿ`.
pub fn x_times(t: &SXToken) -> Combo {
    let mut c = Combo::new();
    match t {
        SXToken::Pow { m } => push(&mut c, Rat::one(), SXToken::pow(m + 1)),
        SXToken::Pole { lambda, n } => {
            push(&mut c, Rat::one(), SXToken::pole(lambda.clone(), n - 1));
            push(&mut c, lambda.clone(), t.clone());
        }
    }
    c
}

/// `(x−λ)⁻¹·t` in the token basis.
pub fn inv_linear_times(lambda: &Rat, t: &SXToken) -> Combo {
    let mut c = Combo::new();
    match t {
        SXToken::Pow { m } => {
            // xᵐ = (x−λ)·Σ λ^{m−1−i} xⁱ + λᵐ
            for i in 0..*m {
                push(&mut c, lambda.pow((m - 1 - i) as u32), SXToken::pow(i));
            }
            push(&mut c, lambda.pow(*m as u32), SXToken::pole(lambda.clone(), 1));
        }
        SXToken::Pole { lambda: mu, n } if mu == lambda => push(&mut c, Rat::one(), SXToken::pole(mu.clone(), n + 1)),
        SXToken::Pole { lambda: mu, n } => {
            // f_k = (x−λ)⁻¹(x−μ)⁻ᵏ = (f_{k−1} − (x−μ)⁻ᵏ)/(λ−μ), f₀ = (x−λ)⁻¹
            let inv = (lambda - mu).recip();
            let mut f: Combo = vec![(Rat::one(), SXToken::pole(lambda.clone(), 1))];
            for k in 1..=*n {
                let mut next = Combo::new();
                for (a, u) in f {
                    push(&mut next, &a * &inv, u);
                }
                push(&mut next, -inv.clone(), SXToken::pole(mu.clone(), k));
                f = next;
            }
            c = f;
        }
    }
    c
}

/// `x·t` for an instance, rejecting poles outside its point set.
pub fn x_action_on_tokens(poles: &[Rat], t: &SXToken) -> Result<Combo, InstanceError> {
    check_token(poles, t)?;
    Ok(x_times(t))
}

/// `(x−λ)⁻¹·t`, defined when `λ` is one of the instance's poles.
pub fn inverse_action_on_tokens(poles: &[Rat], lambda: &Rat, t: &SXToken) -> Result<Combo, InstanceError> {
    check_token(poles, t)?;
    if !poles.contains(lambda) {
        return Err(InstanceError::PoleOutsideInstance(lambda.to_string()));
    }
    Ok(inv_linear_times(lambda, t))
}

fn check_token(poles: &[Rat], t: &SXToken) -> Result<(), InstanceError> {
    match t {
        SXToken::Pole { lambda, n } if *n >= 1 && !poles.contains(lambda) => {
            Err(InstanceError::PoleOutsideInstance(lambda.to_string()))
        }
        SXToken::Pole { n: 0, .. } => Err(InstanceError::BadToken(t.to_string())),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval_combo(c: &Combo, t: &Rat) -> Rat {
        c.iter().map(|(a, u)| a * &u.eval(t).unwrap()).sum()
    }

    #[test]
    fn examples() {
        assert_eq!(x_times(&SXToken::pow(3)), vec![(Rat::one(), SXToken::pow(4))]);
        let p = SXToken::pole(Rat::zero(), 1);
        assert_eq!(x_times(&p), vec![(Rat::one(), SXToken::pow(0))]);
        let q = SXToken::pole(Rat::int(2), 2);
        assert_eq!(x_times(&q), vec![(Rat::one(), SXToken::pole(Rat::int(2), 1)), (Rat::int(2), q.clone())]);
        assert!(x_action_on_tokens(&[Rat::zero()], &q).is_err());
    }

    proptest! {
        #[test]
        fn identities_hold_as_rational_functions(
            m in 0usize..5, n in 1usize..5, l in -3i64..4, mu in -3i64..4, t in 5i64..40
        ) {
            let (l, mu, t) = (Rat::int(l), Rat::int(mu), Rat::new(3 * t + 1, 3));
            for tok in [SXToken::pow(m), SXToken::pole(mu.clone(), n)] {
                let v = tok.eval(&t).unwrap();
                prop_assert_eq!(eval_combo(&x_times(&tok), &t), &t * &v);
                let w = eval_combo(&inv_linear_times(&l, &tok), &t);
                prop_assert_eq!(w * (&t - &l), v);
            }
        }
    }
}
