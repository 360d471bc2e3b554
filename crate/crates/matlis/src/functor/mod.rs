//! `Tor` and `Ext` of `U` and of `K = U/R` against finite and symbolic modules.
//!
//! Finite inputs go through level towers `F(K_n, M)`, `F(U_n, M)` with certified
//! stabilization; infinite values come from closed forms. `u` is injective in both families,
//! so the functors of the complex `R → U` are those of `K`.

pub mod adjoint;
pub mod cert;
pub mod closed;
mod complexes;
pub mod five;
pub mod tower;
pub mod value;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{FPModPID, QMat};
use crate::instances::{EpiInstance, InstanceError};
use crate::quiver::{pencil_profile, KronRep, Morphism, QuiverError, Rep};

pub use cert::{horizon, CertKind, Mode, StabCert, Stabilized, WINDOW};
pub use tower::{Conn, Obj, Tower};
pub use value::{FinMod, ModValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("no stabilization certified within level budget {0}")]
    NoStabilization(usize),
    #[error("symbolic input not supported: {0}")]
    SymbolicUnsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A forced implication or an internal cross-check failed.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Which argument: `U` itself or `K = U/R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    U,
    K,
}

/// `Ext0` is `Hom`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functor {
    Tor0,
    Tor1,
    Ext0,
    Ext1,
}

impl FromStr for Functor {
    type Err = FunctorError;

    fn from_str(s: &str) -> Result<Functor, FunctorError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tor0" | "tensor" => Ok(Functor::Tor0),
            "tor1" => Ok(Functor::Tor1),
            "ext0" | "hom" => Ok(Functor::Ext0),
            "ext1" => Ok(Functor::Ext1),
            other => Err(FunctorError::Precondition(format!("unknown functor {other}"))),
        }
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Functor::Tor0 => "tor0",
            Functor::Tor1 => "tor1",
            Functor::Ext0 => "ext0",
            Functor::Ext1 => "ext1",
        };
        f.write_str(s)
    }
}

impl Functor {
    pub fn obj(self, side: Side) -> Obj {
        match (side, self) {
            (Side::U, Functor::Tor0) => Obj::Tor0U,
            (Side::U, Functor::Tor1) => Obj::Tor1U,
            (Side::U, Functor::Ext0) => Obj::HomU,
            (Side::U, Functor::Ext1) => Obj::Ext1U,
            (Side::K, Functor::Tor0) => Obj::Tor0K,
            (Side::K, Functor::Tor1) => Obj::Tor1K,
            (Side::K, Functor::Ext0) => Obj::HomK,
            (Side::K, Functor::Ext1) => Obj::Ext1K,
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            Functor::Tor0 | Functor::Tor1 => Mode::Colim,
            Functor::Ext0 | Functor::Ext1 => Mode::Lim,
        }
    }
}

/// A value with its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorValue {
    pub value: ModValue,
    pub cert: StabCert,
}

impl StabCert {
    pub fn closed_form(mode: Mode) -> StabCert {
        StabCert { stable_level: 1, checked_through: 1, mode, kind: CertKind::ClosedForm }
    }
}

/// Largest block exponent of a finite module: divisor valuations at the points over `Cpid`,
/// block sizes (regular size, `ε + 1` for the non-regular blocks) over `Kron`.
pub fn exponent(inst: &EpiInstance, m: &Rep) -> usize {
    if m.is_zero() {
        return 0;
    }
    if inst.is_kron() {
        let k = KronRep::from_rep(m);
        match pencil_profile(&k) {
            Ok(p) => {
                let regular = p.regular.values().flat_map(|s| s.keys().copied()).max().unwrap_or(0);
                let pre = p.preprojective.keys().chain(p.preinjective.keys()).map(|e| e + 1).max().unwrap_or(0);
                regular.max(pre).max(p.irrational_dim)
            }
            Err(_) => k.d1 + k.d2,
        }
    } else {
        let p = FPModPID::from_action(&m.maps[0]);
        inst.poles().iter().map(|y| p.exponent_at(y)).max().unwrap_or(0)
    }
}

pub fn default_budget(inst: &EpiInstance, m: &Rep) -> usize {
    4 + exponent(inst, m)
}

/// Certified level computations for one finite module.
pub struct Engine<'a> {
    tower: Tower<'a>,
    pub exponent: usize,
    pub budget: usize,
}

impl<'a> Engine<'a> {
    pub fn new(inst: &'a EpiInstance, m: &Rep) -> Engine<'a> {
        Engine::with_budget(inst, m, default_budget(inst, m))
    }

    pub fn with_budget(inst: &'a EpiInstance, m: &Rep, budget: usize) -> Engine<'a> {
        let exponent = exponent(inst, m);
        let levels = horizon(budget.max(1), exponent + 1);
        Engine { tower: Tower::new(inst, m, levels), exponent, budget: budget.max(1) }
    }

    pub fn tower(&self) -> &Tower<'a> {
        &self.tower
    }

    pub fn module(&self) -> &Rep {
        self.tower.module()
    }

    /// Dying window: classes of the right exact towers die within `exponent + 1` levels;
    /// the left exact ones have injective, resp. surjective, transitions.
    pub fn window(&self, o: Obj) -> usize {
        match o {
            Obj::Tor0K | Obj::Tor0U | Obj::HomK | Obj::HomU => self.exponent + 1,
            Obj::Tor1K | Obj::Tor1U | Obj::Ext1K | Obj::Ext1U => 0,
        }
    }

    pub fn stabilize(&self, o: Obj) -> Result<Stabilized, FunctorError> {
        if self.module().is_zero() {
            let z = Rep::zero(self.module().quiver);
            let id = Morphism::identity(&z);
            let mode = if o.is_lim() { Mode::Lim } else { Mode::Colim };
            return Ok(Stabilized { level: 1, rep: z, canon: id.clone(), lift: id, cert: StabCert::trivial(mode) });
        }
        cert::certify(&self.tower, o, self.budget, self.window(o))
    }

    fn chain_cert(&self, dims: impl Fn(usize) -> usize, mode: Mode) -> Result<(usize, StabCert), FunctorError> {
        let w = self.exponent + 1;
        for s in 1..=self.budget {
            let h = horizon(s, w);
            if (s..=h).all(|n| dims(n) == dims(s)) {
                let kind = if dims(s) == 0 { CertKind::Vanishing } else { CertKind::Stable };
                return Ok((s, StabCert { stable_level: s, checked_through: h, mode, kind }));
            }
        }
        Err(FunctorError::NoStabilization(self.budget))
    }

    /// Vanishing of a colimit object: every class of every level up to the budget dies
    /// within the window. A class that survives, with stationary rank, through the horizon
    /// certifies a nonzero value.
    pub fn colim_vanishes(&self, o: Obj) -> Result<bool, FunctorError> {
        assert!(!o.is_lim(), "{o:?} is a limit object");
        if self.module().is_zero() {
            return Ok(true);
        }
        let t = &self.tower;
        let w = self.window(o);
        let alive = |n: usize, m: usize| t.composite(o, n, m).rank_dims().iter().sum::<usize>();
        let levels = 1..=self.budget;
        if levels.clone().all(|n| alive(n, n + w) == 0) {
            return Ok(true);
        }
        let h = |n: usize| horizon(n, w);
        if levels.clone().any(|n| alive(n, h(n)) > 0 && alive(n, n + w) == alive(n, h(n))) {
            return Ok(false);
        }
        Err(FunctorError::NoStabilization(self.budget))
    }

    /// Vanishing of a limit object: the images `im(V_{n+w} → V_n)` are zero for every level
    /// up to the budget. A nonzero image that is stationary through the horizon certifies a
    /// nonzero value.
    pub fn lim_vanishes(&self, o: Obj) -> Result<bool, FunctorError> {
        assert!(o.is_lim(), "{o:?} is a colimit object");
        if self.module().is_zero() {
            return Ok(true);
        }
        let t = &self.tower;
        let w = self.window(o);
        let img = |n: usize, m: usize| t.composite(o, n, m).rank_dims().iter().sum::<usize>();
        let levels = 1..=self.budget;
        if levels.clone().all(|n| img(n, n + w) == 0) {
            return Ok(true);
        }
        let h = |n: usize| horizon(n, w);
        if levels.clone().any(|n| img(n, h(n)) > 0 && img(n, n + w) == img(n, h(n))) {
            return Ok(false);
        }
        Err(FunctorError::NoStabilization(self.budget))
    }

    /// `im(γ: Γ(M) → M) = ker(M → U ⊗ M)`, the union of the increasing images of `γ_n`.
    pub fn gamma_image(&self) -> Result<(Vec<QMat>, StabCert), FunctorError> {
        let t = &self.tower;
        let (s, c) = self.chain_cert(|n| t.gamma_image_dim(n), Mode::Colim)?;
        let img = t.connecting(Conn::Gamma, s).comps.iter().map(QMat::column_space).collect();
        Ok((img, c))
    }

    /// `im(Hom(U, M) → M) = ker(δ: M → Δ(M))`, the intersection of the decreasing `ker δ_n`.
    pub fn eval_image(&self) -> Result<(Vec<QMat>, StabCert), FunctorError> {
        let t = &self.tower;
        let dim = |n: usize| self.module().total_dim() - t.delta_rank(n);
        let (s, c) = self.chain_cert(dim, Mode::Lim)?;
        Ok((t.delta_kernel(s), c))
    }
}

fn fin_value(st: &Stabilized) -> FunctorValue {
    FunctorValue { value: ModValue::fin(&st.rep), cert: st.cert.clone() }
}

fn check_ring(inst: &EpiInstance, m: &FinMod) -> Result<(), FunctorError> {
    match (m, inst.is_kron()) {
        (FinMod::Kron(_), true) | (FinMod::Pid(_), false) => Ok(()),
        _ => Err(FunctorError::Instance(InstanceError::WrongModule)),
    }
}

fn kron_finite(inst: &EpiInstance, k: &KronRep, side: Side, f: Functor) -> Result<FunctorValue, FunctorError> {
    let closed = |v: ModValue| Ok(FunctorValue { value: v, cert: StabCert::closed_form(Mode::Colim) });
    if side == Side::U && matches!(f, Functor::Tor0 | Functor::Tor1) {
        let (coker, ker_rank) = closed::morita(inst, k);
        match f {
            Functor::Tor0 if coker.normalized().free_rank > 0 => return closed(closed::u_module_value(inst, &coker)),
            Functor::Tor1 if ker_rank > 0 => return closed(closed::u_module_value(inst, &FPModPID::free(ker_rank))),
            _ => {}
        }
    }
    let m = k.to_rep();
    Ok(fin_value(&Engine::new(inst, &m).stabilize(f.obj(side))?))
}

fn cpid_finite(inst: &EpiInstance, p: &FPModPID, side: Side, f: Functor) -> Result<FunctorValue, FunctorError> {
    let nf = p.normalized();
    let torsion = FPModPID::from_parts(0, &nf.divisors);
    let numeric = if torsion.is_zero() {
        None
    } else {
        let m = Rep::loop_module(torsion.action_matrix().expect("finite length"));
        Some(fin_value(&Engine::new(inst, &m).stabilize(f.obj(side))?))
    };
    if nf.free_rank == 0 {
        return Ok(numeric.unwrap_or_else(|| FunctorValue {
            value: ModValue::zero(inst.quiver()),
            cert: StabCert::trivial(f.mode()),
        }));
    }
    let free = closed::cpid_localized(inst, &FPModPID::free(nf.free_rank), &[], side, f)?;
    Ok(match numeric {
        Some(n) => FunctorValue { value: free.plus(&n.value)?, cert: n.cert },
        None => FunctorValue { value: free, cert: StabCert::closed_form(f.mode()) },
    })
}

fn evaluate(inst: &EpiInstance, m: &ModValue, side: Side, f: Functor) -> Result<FunctorValue, FunctorError> {
    match m {
        ModValue::FiniteDim { module } => {
            check_ring(inst, module)?;
            match module {
                FinMod::Kron(k) => kron_finite(inst, k, side, f),
                FinMod::Pid(p) => cpid_finite(inst, p, side, f),
            }
        }
        _ if inst.is_kron() => Err(FunctorError::SymbolicUnsupported(format!(
            "{} input over the Kronecker family",
            m.shape_name()
        ))),
        ModValue::AdicProd { rank, torsion: Some(t) } => {
            let part = evaluate(inst, &ModValue::FiniteDim { module: t.clone() }, side, f)?;
            let sym = closed::cpid_symbolic(inst, &ModValue::adic(rank.clone(), None), side, f)?;
            Ok(FunctorValue { value: sym.plus(&part.value)?, cert: part.cert })
        }
        _ => Ok(FunctorValue {
            value: closed::cpid_symbolic(inst, m, side, f)?,
            cert: StabCert::closed_form(f.mode()),
        }),
    }
}

/// `Tor_i(U, M)` and `Ext^i(U, M)` for `i = 0, 1`.
pub fn tor_ext_u(inst: &EpiInstance, m: &ModValue, f: Functor) -> Result<FunctorValue, FunctorError> {
    evaluate(inst, m, Side::U, f)
}

/// `Tor_i(K, M)` and `Ext^i(K, M)` for `i = 0, 1`.
pub fn tor_ext_k(inst: &EpiInstance, m: &ModValue, f: Functor) -> Result<FunctorValue, FunctorError> {
    evaluate(inst, m, Side::K, f)
}

/// A coreflection or reflection value with its natural map.
///
/// `core` is the whole value when `complete`; otherwise it is the finite quotient `im γ` of
/// `Γ(M)` by its localized part, with `map` the inclusion into `M`.
#[derive(Clone, Debug)]
pub struct Natural {
    pub value: ModValue,
    pub cert: StabCert,
    pub core: Rep,
    /// `γ: core → M`, resp. `δ: M → core`.
    pub map: Morphism,
    pub complete: bool,
}

/// `Γ(M) = Tor₁(K, M)` with `γ: Γ(M) → M`.
pub fn gamma(inst: &EpiInstance, m: &Rep) -> Result<Natural, FunctorError> {
    inst.check_module(m)?;
    let e = Engine::new(inst, m);
    let ker_rank = if inst.is_kron() { closed::morita(inst, &KronRep::from_rep(m)).1 } else { 0 };
    if ker_rank == 0 {
        let st = e.stabilize(Obj::Tor1K)?;
        let map = e.tower().connecting(Conn::Gamma, st.level).compose(&st.lift);
        return Ok(Natural { value: ModValue::fin(&st.rep), cert: st.cert, core: st.rep, map, complete: true });
    }
    let (img, cert) = e.gamma_image()?;
    let (core, map) = m.subrep(&img);
    let value = ModValue::MixedExt {
        localized: FPModPID::free(ker_rank),
        points: inst.points().to_vec(),
        finite: FinMod::from_rep(&core),
    };
    Ok(Natural { value, cert, core, map, complete: false })
}

/// `Δ(M) = Ext¹(K, M)` with `δ: M → Δ(M)`.
pub fn delta(inst: &EpiInstance, m: &Rep) -> Result<Natural, FunctorError> {
    inst.check_module(m)?;
    let e = Engine::new(inst, m);
    let st = e.stabilize(Obj::Ext1K)?;
    let map = st.lift.compose(&e.tower().connecting(Conn::Delta, st.level));
    Ok(Natural { value: ModValue::fin(&st.rep), cert: st.cert, core: st.rep, map, complete: true })
}

/// `M / im(Hom(U, M) → M)` with the projection; the part of `Δ(M)` below `Ext¹(U, M)`.
pub fn delta_core(inst: &EpiInstance, m: &Rep) -> Result<(Rep, Morphism, StabCert), FunctorError> {
    inst.check_module(m)?;
    let (img, cert) = Engine::new(inst, m).eval_image()?;
    let (q, p) = m.quotient(&img);
    Ok((q, p, cert))
}

pub fn gamma_delta(inst: &EpiInstance, m: &Rep) -> Result<(Natural, Natural), FunctorError> {
    Ok((gamma(inst, m)?, delta(inst, m)?))
}

/// `Γ(φ)` or `Δ(φ)` for `φ: M → M'`, with the natural maps of both ends, all read off at a
/// common certified level. `o` is `Tor1K` or `Ext1K`; both values must be finite.
pub fn functorial(
    inst: &EpiInstance,
    m: &Rep,
    m2: &Rep,
    phi: &Morphism,
    o: Obj,
) -> Result<(Natural, Natural, Morphism), FunctorError> {
    inst.check_module(m)?;
    inst.check_module(m2)?;
    if !m.is_morphism(m2, phi) {
        return Err(FunctorError::Precondition("map is not a morphism".into()));
    }
    if !matches!(o, Obj::Tor1K | Obj::Ext1K) {
        return Err(FunctorError::Precondition(format!("{o:?} is not a coreflector or reflector")));
    }
    if inst.is_kron() {
        for x in [m, m2] {
            if o == Obj::Tor1K && closed::morita(inst, &KronRep::from_rep(x)).1 > 0 {
                return Err(FunctorError::Precondition("coreflection has a localized part".into()));
            }
        }
    }
    let budget = default_budget(inst, m).max(default_budget(inst, m2));
    let (e1, e2) = (Engine::with_budget(inst, m, budget), Engine::with_budget(inst, m2, budget));
    let l = e1.stabilize(o)?.level.max(e2.stabilize(o)?.level);
    let (w1, w2) = (e1.window(o), e2.window(o));
    if !(cert::certified_at(e1.tower(), o, l, w1) && cert::certified_at(e2.tower(), o, l, w2)) {
        return Err(FunctorError::NoStabilization(budget));
    }
    let (s1, s2) = (cert::value_at(e1.tower(), o, l, w1), cert::value_at(e2.tower(), o, l, w2));
    let level_map = e1.tower().induced(e2.tower(), phi, o, l);
    let natural = |e: &Engine, st: Stabilized| {
        let map = if o == Obj::Tor1K {
            e.tower().connecting(Conn::Gamma, l).compose(&st.lift)
        } else {
            st.lift.compose(&e.tower().connecting(Conn::Delta, l))
        };
        Natural { value: ModValue::fin(&st.rep), cert: st.cert, core: st.rep, map, complete: true }
    };
    let induced = if o == Obj::Tor1K {
        s2.canon.compose(&level_map).compose(&s1.lift)
    } else {
        s2.lift.compose(&level_map).compose(&s1.canon)
    };
    Ok((natural(&e1, s1), natural(&e2, s2), induced))
}

#[cfg(test)]
mod tests;
