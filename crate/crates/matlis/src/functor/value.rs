//! Functor values: finite-dimensional modules and the symbolic shapes of the infinite ones.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::FunctorError;
use crate::exact::{FPModPID, Poly, QMat, Rat};
use crate::quiver::{KronRep, Point, Quiver, Rep};

/// A finite-dimensional module: a Kronecker representation or a finite-length ℚ[x]-module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinMod {
    Kron(KronRep),
    Pid(FPModPID),
}

impl FinMod {
    pub fn from_rep(r: &Rep) -> FinMod {
        match r.quiver {
            Quiver::Kronecker => FinMod::Kron(KronRep::from_rep(r)),
            Quiver::Loop => FinMod::Pid(canonical_pid(&FPModPID::from_action(&r.maps[0]))),
        }
    }

    /// The module in the engine's representation form; ℚ[x]-modules use companion blocks.
    pub fn to_rep(&self) -> Result<Rep, FunctorError> {
        match self {
            FinMod::Kron(k) => Ok(k.to_rep()),
            FinMod::Pid(p) => p
                .action_matrix()
                .map(Rep::loop_module)
                .ok_or_else(|| FunctorError::Precondition("module is not of finite length".into())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FinMod::Kron(k) => k.is_zero(),
            FinMod::Pid(p) => p.is_zero(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            FinMod::Kron(k) => Some(k.d1 + k.d2),
            FinMod::Pid(p) => p.dim(),
        }
    }
}

/// `ℚ[x]^r ⊕ ⨁ ℚ[x]/(dᵢ)` in normal form, with a diagonal presentation.
pub fn canonical_pid(m: &FPModPID) -> FPModPID {
    let n = m.normalized();
    FPModPID::from_parts(n.free_rank, &n.divisors)
}

/// Removes from every divisor its factors `x − p` for `p` in `points`.
pub fn drop_factors(divisors: &[Poly], points: &[Rat]) -> Vec<Poly> {
    divisors
        .iter()
        .map(|d| {
            points.iter().fold(d.clone(), |acc, p| {
                let v = acc.valuation_at(p);
                acc.div_exact(&Poly::linear(p).pow(v))
            })
        })
        .filter(|d| !d.is_constant())
        .collect()
}

/// The `(x − μ)`-primary parts of the divisors.
pub fn primary_factors(divisors: &[Poly], mu: &Rat) -> Vec<Poly> {
    divisors
        .iter()
        .map(|d| Poly::linear(mu).pow(d.valuation_at(mu)))
        .filter(|d| !d.is_constant())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape")]
pub enum ModValue {
    FiniteDim {
        module: FinMod,
    },
    /// `S_P ⊗ N` for a finitely generated ℚ[x]-module `N`; for the Kronecker family, the
    /// `U`-module corresponding to this `S_X`-module.
    Localized {
        module: FPModPID,
        points: Vec<Point>,
    },
    /// `⨁_μ P(μ)^{a_μ}` with `P(μ) = ℚ[x, (x−μ)⁻¹]/ℚ[x]`.
    PruferSum {
        mult: BTreeMap<Rat, usize>,
    },
    /// `∏_μ ℚ[[x−μ]]^{r_μ}` plus a finite-length part.
    AdicProd {
        rank: BTreeMap<Rat, usize>,
        #[serde(default)]
        torsion: Option<FinMod>,
    },
    /// An extension with a localized submodule and a finite-dimensional quotient. Only the
    /// two ends are recorded, not the extension class.
    MixedExt {
        localized: FPModPID,
        points: Vec<Point>,
        finite: FinMod,
    },
}

fn clean(m: &BTreeMap<Rat, usize>) -> BTreeMap<Rat, usize> {
    m.iter().filter(|(_, &v)| v > 0).map(|(k, &v)| (k.clone(), v)).collect()
}

impl ModValue {
    pub fn zero(q: Quiver) -> ModValue {
        ModValue::fin(&Rep::zero(q))
    }

    pub fn fin(r: &Rep) -> ModValue {
        ModValue::FiniteDim { module: FinMod::from_rep(r) }
    }

    pub fn prufer(mult: BTreeMap<Rat, usize>) -> ModValue {
        ModValue::PruferSum { mult: clean(&mult) }
    }

    pub fn adic(rank: BTreeMap<Rat, usize>, torsion: Option<FinMod>) -> ModValue {
        ModValue::AdicProd { rank: clean(&rank), torsion: torsion.filter(|t| !t.is_zero()) }
    }

    pub fn localized(module: &FPModPID, points: &[Point]) -> ModValue {
        let fin: Vec<Rat> = points.iter().filter_map(|p| p.finite().cloned()).collect();
        let n = module.normalized();
        let m = FPModPID::from_parts(n.free_rank, &drop_factors(&n.divisors, &fin));
        if m.is_zero() {
            return ModValue::FiniteDim { module: FinMod::Pid(FPModPID::zero()) };
        }
        ModValue::Localized { module: m, points: points.to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ModValue::FiniteDim { module } => module.is_zero(),
            ModValue::Localized { module, .. } => module.is_zero(),
            ModValue::PruferSum { mult } => mult.values().all(|&v| v == 0),
            ModValue::AdicProd { rank, torsion } => {
                rank.values().all(|&v| v == 0) && torsion.as_ref().is_none_or(FinMod::is_zero)
            }
            ModValue::MixedExt { localized, finite, .. } => localized.is_zero() && finite.is_zero(),
        }
    }

    pub fn shape_name(&self) -> &'static str {
        match self {
            ModValue::FiniteDim { .. } => "FiniteDim",
            ModValue::Localized { .. } => "Localized",
            ModValue::PruferSum { .. } => "PruferSum",
            ModValue::AdicProd { .. } => "AdicProd",
            ModValue::MixedExt { .. } => "MixedExt",
        }
    }

    /// The finite-dimensional module, when the value is one.
    pub fn finite(&self) -> Option<&FinMod> {
        match self {
            ModValue::FiniteDim { module } => Some(module),
            _ => None,
        }
    }

    /// Direct sum of values of the same functor.
    pub fn plus(&self, other: &ModValue) -> Result<ModValue, FunctorError> {
        use ModValue::*;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let add = |a: &BTreeMap<Rat, usize>, b: &BTreeMap<Rat, usize>| {
            let mut m = a.clone();
            for (k, v) in b {
                *m.entry(k.clone()).or_insert(0) += v;
            }
            m
        };
        match (self, other) {
            (FiniteDim { module: a }, FiniteDim { module: b }) => Ok(FiniteDim { module: fin_sum(a, b)? }),
            (Localized { module, points }, FiniteDim { module: FinMod::Pid(t) })
            | (FiniteDim { module: FinMod::Pid(t) }, Localized { module, points }) => {
                Ok(ModValue::localized(&module.direct_sum(t), points))
            }
            (Localized { module: a, points: p }, Localized { module: b, points: q }) if p == q => {
                Ok(ModValue::localized(&a.direct_sum(b), p))
            }
            (PruferSum { mult: a }, PruferSum { mult: b }) => Ok(ModValue::prufer(add(a, b))),
            (AdicProd { rank: a, torsion: s }, AdicProd { rank: b, torsion: t }) => {
                let tor = match (s, t) {
                    (Some(x), Some(y)) => Some(fin_sum(x, y)?),
                    (x, y) => x.clone().or(y.clone()),
                };
                Ok(ModValue::adic(add(a, b), tor))
            }
            (AdicProd { rank, torsion }, FiniteDim { module }) | (FiniteDim { module }, AdicProd { rank, torsion }) => {
                let tor = match torsion {
                    Some(x) => fin_sum(x, module)?,
                    None => module.clone(),
                };
                Ok(ModValue::adic(rank.clone(), Some(tor)))
            }
            (a, b) => Err(FunctorError::SymbolicUnsupported(format!(
                "direct sum of {} and {}",
                a.shape_name(),
                b.shape_name()
            ))),
        }
    }
}

fn fin_sum(a: &FinMod, b: &FinMod) -> Result<FinMod, FunctorError> {
    match (a, b) {
        (FinMod::Kron(x), FinMod::Kron(y)) => Ok(FinMod::Kron(x.direct_sum(y))),
        (FinMod::Pid(x), FinMod::Pid(y)) => Ok(FinMod::Pid(canonical_pid(&x.direct_sum(y)))),
        _ => Err(FunctorError::Precondition("modules over different rings".into())),
    }
}

impl fmt::Display for FinMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinMod::Kron(k) => write!(f, "KronRep{:?}", k.dims()),
            FinMod::Pid(p) => write_pid(f, p),
        }
    }
}

fn write_pid(f: &mut fmt::Formatter<'_>, p: &FPModPID) -> fmt::Result {
    let n = p.normalized();
    let mut parts: Vec<String> = Vec::new();
    if n.free_rank > 0 {
        parts.push(if n.free_rank == 1 { "k[x]".into() } else { format!("k[x]^{}", n.free_rank) });
    }
    parts.extend(n.divisors.iter().map(|d| format!("k[x]/({d})")));
    if parts.is_empty() {
        write!(f, "0")
    } else {
        write!(f, "{}", parts.join(" + "))
    }
}

fn write_map(f: &mut fmt::Formatter<'_>, m: &BTreeMap<Rat, usize>) -> fmt::Result {
    let items: Vec<String> = m.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    write!(f, "{{{}}}", items.join(","))
}

impl fmt::Display for ModValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModValue::FiniteDim { module } if module.is_zero() => write!(f, "0"),
            ModValue::FiniteDim { module } => write!(f, "{module}"),
            ModValue::Localized { module, points } => {
                write!(f, "Localized(")?;
                write_pid(f, module)?;
                let pts: Vec<String> = points.iter().map(Point::to_string).collect();
                write!(f, " at {{{}}})", pts.join(","))
            }
            ModValue::PruferSum { mult } => {
                write!(f, "PruferSum")?;
                write_map(f, mult)
            }
            ModValue::AdicProd { rank, torsion } => {
                write!(f, "AdicProd")?;
                write_map(f, rank)?;
                match torsion {
                    Some(t) => write!(f, " + {t}"),
                    None => Ok(()),
                }
            }
            ModValue::MixedExt { localized, points, finite } => {
                write!(f, "MixedExt(")?;
                write_pid(f, localized)?;
                let pts: Vec<String> = points.iter().map(Point::to_string).collect();
                write!(f, " at {{{}}} by {finite})", pts.join(","))
            }
        }
    }
}

/// Dimension of an `R`-module value at a truncation level, for symbolic shapes:
/// `n` per unit of multiplicity and point.
pub fn level_dim(v: &ModValue, n: usize) -> Option<usize> {
    match v {
        ModValue::FiniteDim { module } => module.dim(),
        ModValue::PruferSum { mult } => Some(n * mult.values().sum::<usize>()),
        ModValue::AdicProd { rank, torsion } => {
            Some(n * rank.values().sum::<usize>() + torsion.as_ref().and_then(FinMod::dim).unwrap_or(0))
        }
        ModValue::Localized { .. } | ModValue::MixedExt { .. } => None,
    }
}

/// `x` acting on `ℚ[x]/(x−μ)ⁿ` tensor-style blocks, used to realize symbolic values at a level.
pub fn jordan_block(mu: &Rat, n: usize) -> QMat {
    QMat::from_fn(n, n, |i, j| {
        if i == j {
            mu.clone()
        } else if j == i + 1 {
            Rat::one()
        } else {
            Rat::zero()
        }
    })
}
