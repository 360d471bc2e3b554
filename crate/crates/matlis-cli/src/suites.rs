//! The named verification suites. Each suite splits into a generator, which draws the
//! serialized inputs of its cases from the seed, and a checker, which decides one case from
//! its input alone. A failing case therefore replays from its record.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use matlis::classify::blocks::{lambda_decompose, BlockSide};
use matlis::classify::endring::end_ring_commutativity_check;
use matlis::classify::flat::{flatness_witness_search, FlatOutcome};
use matlis::classify::matlis::{first_matlis_symbolic, second_matlis_naturality, second_matlis_roundtrip, MatlisOrder};
use matlis::classify::projinj::proj_inj_special_check;
use matlis::classify::{classify, ClassFlags, Path};
use matlis::exact::{FPModPID, QMat, Rat};
use matlis::functor::adjoint::{adjunction_check_comodule, adjunction_check_contramodule};
use matlis::functor::five::{five_term_check, FiveSide};
use matlis::functor::{FinMod, FunctorError, ModValue};
use matlis::instances::EpiInstance;
use matlis::quiver::rep::{extension, hom_ext};
use matlis::quiver::{are_isomorphic, KronRep, Morphism, Point, Rep, RepMap};

use crate::gen::{self, case_rng, Module};
use crate::report::{CaseRecord, Report, Verdict};
use crate::spec::{SpecError, SuiteName, SuiteSpec};

type Checked = Result<(Value, bool), FunctorError>;

pub fn run_suite(spec: &SuiteSpec) -> Result<Report, SpecError> {
    let inst = spec.validate()?;
    let start = Instant::now();
    let mut warnings = Vec::new();
    let inputs = generate(spec, &inst, &mut warnings);
    let cases = inputs.into_iter().enumerate().map(|(i, input)| run_case(spec, &inst, i, input)).collect();
    Ok(Report::new(spec, cases, warnings, start.elapsed().as_millis()))
}

/// Decides one case from its serialized input. A panic inside the library is an error
/// verdict, never a pass.
pub fn run_case(spec: &SuiteSpec, inst: &EpiInstance, index: usize, input: Value) -> CaseRecord {
    let result = catch_unwind(AssertUnwindSafe(|| check(spec, inst, &input)));
    let (output, verdict) = match result {
        Ok(Ok((out, true))) => (out, Verdict::Pass),
        Ok(Ok((out, false))) => (out, Verdict::Fail),
        Ok(Err(e)) => (Value::Null, Verdict::from_error(&e)),
        Err(p) => {
            let message = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (Value::Null, Verdict::Error { message: format!("panic: {message}") })
        }
    };
    CaseRecord { index, input, output, verdict }
}

/// Re-runs a recorded case.
pub fn replay(spec: &SuiteSpec, record: &CaseRecord) -> Result<CaseRecord, SpecError> {
    let inst = spec.validate()?;
    Ok(run_case(spec, &inst, record.index, record.input.clone()))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("inputs serialize")
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T, FunctorError> {
    serde_json::from_value(v.clone()).map_err(|e| FunctorError::Precondition(format!("malformed case input: {e}")))
}

fn generate(spec: &SuiteSpec, inst: &EpiInstance, warnings: &mut Vec<String>) -> Vec<Value> {
    let n = spec.samples;
    let b = spec.dim_bound;
    let each = |f: &dyn Fn(&mut rand_chacha::ChaCha8Rng, usize) -> Value| -> Vec<Value> {
        (0..n).map(|i| f(&mut case_rng(spec.seed, i), i)).collect()
    };
    match spec.suite {
        SuiteName::FiveTermTor | SuiteName::FiveTermExt => each(&|rng, _| {
            let module = if !inst.is_kron() && rng.gen_ratio(1, 8) {
                Module::Pid(gen::pid_presentation(rng, inst, b))
            } else {
                Module::from_rep(&gen::any_module(rng, inst, b))
            };
            to_value(&ModuleInput { module })
        }),
        SuiteName::FirstMatlis => {
            let corpus = symbolic_corpus(inst, b);
            if n < corpus.len() {
                warnings.push(format!("corpus truncated to {n} of {} values", corpus.len()));
            }
            corpus.into_iter().take(n).map(|value| to_value(&SymbolicInput { value })).collect()
        }
        SuiteName::SecondMatlis => {
            let morphisms = spec.morphisms.unwrap_or(n / 2);
            each(&|rng, i| {
                let mut m = gen::comodule(rng, inst, b);
                let (partner, morphism) = if i < morphisms {
                    let (m2, phi) = nonzero_morphism(rng, inst, b, &mut m);
                    (Some(Module::from_rep(&m2)), Some(phi.comps))
                } else {
                    (None, None)
                };
                to_value(&SecondInput { module: Module::from_rep(&m), partner, morphism })
            })
        }
        SuiteName::ClassifyAgreement => each(&|rng, _| {
            let m = if inst.is_kron() {
                gen::mixed_kron(rng, inst, b).to_rep()
            } else {
                let local = rng.gen_bool(0.5);
                gen::pid_module(rng, inst, b, local)
            };
            to_value(&ModuleInput { module: Module::from_rep(&m) })
        }),
        SuiteName::ClosureProperties => each(&|rng, _| {
            let m = gen::comodule(rng, inst, b);
            let n2 = gen::comodule(rng, inst, b);
            let phi = gen::random_morphism(rng, &m, &n2);
            let ext = gen::random_vector(rng, cocycle_len(&m, &n2));
            let a = gen::any_module(rng, inst, b);
            let a2 = gen::any_module(rng, inst, b);
            let vertex = rng.gen_range(0..a.dims.len());
            let vector = gen::random_vector(rng, a.dims[vertex]);
            let a_ext = gen::random_vector(rng, cocycle_len(&a, &a2));
            to_value(&ClosureInput {
                m: Module::from_rep(&m),
                n: Module::from_rep(&n2),
                phi: phi.comps,
                ext,
                a: Module::from_rep(&a),
                a2: Module::from_rep(&a2),
                vertex,
                vector,
                a_ext,
            })
        }),
        SuiteName::Adjunction => each(&|rng, _| {
            to_value(&AdjunctionInput {
                m: Module::from_rep(&gen::comodule(rng, inst, b)),
                a: Module::from_rep(&gen::any_module(rng, inst, b)),
                c: Module::from_rep(&gen::comodule(rng, inst, b)),
                b: Module::from_rep(&gen::any_module(rng, inst, b)),
            })
        }),
        SuiteName::LambdaDecompose => each(&|rng, _| {
            let m = gen::kron_comodule(rng, inst, b);
            let (p1, p2) = (gen::random_invertible(rng, m.d1), gen::random_invertible(rng, m.d2));
            to_value(&LambdaInput { module: m, p1, p2 })
        }),
        SuiteName::FlatnessDichotomy => single(n, || {
            let corpus = if inst.is_kron() {
                Vec::new()
            } else {
                (0..n).map(|i| gen::pid_presentation(&mut case_rng(spec.seed, i), inst, b)).collect()
            };
            to_value(&FlatInput { budget: b, corpus })
        }),
        SuiteName::EndRing => single(n, || {
            to_value(&EndRingInput { levels: spec.level_budget.unwrap_or(b), samples: n, seed: spec.seed })
        }),
        SuiteName::ProjInjConditions => single(n, || {
            let samples = (0..n).map(|i| Module::from_rep(&gen::any_module(&mut case_rng(spec.seed, i), inst, b))).collect();
            to_value(&ProjInjInput { samples })
        }),
    }
}

/// Suites that run one case over all samples; no samples means no case.
fn single(n: usize, f: impl FnOnce() -> Value) -> Vec<Value> {
    if n == 0 {
        Vec::new()
    } else {
        vec![f()]
    }
}

fn check(spec: &SuiteSpec, inst: &EpiInstance, input: &Value) -> Checked {
    match spec.suite {
        SuiteName::FiveTermTor => check_five(inst, from_value(input)?, FiveSide::Tor),
        SuiteName::FiveTermExt => check_five(inst, from_value(input)?, FiveSide::Ext),
        SuiteName::FirstMatlis => {
            let i: SymbolicInput = from_value(input)?;
            let r = first_matlis_symbolic(inst, &i.value, spec.level_budget.unwrap_or(spec.dim_bound))?;
            Ok((to_value(&r), r.ok))
        }
        SuiteName::SecondMatlis => check_second(inst, from_value(input)?),
        SuiteName::ClassifyAgreement => check_agreement(inst, from_value(input)?),
        SuiteName::ClosureProperties => check_closure(inst, from_value(input)?),
        SuiteName::Adjunction => {
            let i: AdjunctionInput = from_value(input)?;
            let co = adjunction_check_comodule(inst, &i.m.to_rep()?, &i.a.to_rep()?)?;
            let contra = adjunction_check_contramodule(inst, &i.c.to_rep()?, &i.b.to_rep()?)?;
            Ok((json!({ "comodule": co, "contramodule": contra }), co.iso && contra.iso))
        }
        SuiteName::LambdaDecompose => check_lambda(inst, from_value(input)?),
        SuiteName::FlatnessDichotomy => {
            let i: FlatInput = from_value(input)?;
            let out = flatness_witness_search(inst, i.budget, &i.corpus)?;
            let pass = match &out {
                FlatOutcome::Witness { .. } => inst.is_kron(),
                FlatOutcome::FlatCertified { corpus_size, .. } => !inst.is_kron() && *corpus_size == i.corpus.len(),
                FlatOutcome::NotFound { .. } => false,
            };
            Ok((to_value(&out), pass))
        }
        SuiteName::EndRing => {
            let i: EndRingInput = from_value(input)?;
            let v = end_ring_commutativity_check(inst, i.levels, i.samples, i.seed)?;
            Ok((to_value(&v), v.ok()))
        }
        SuiteName::ProjInjConditions => {
            let i: ProjInjInput = from_value(input)?;
            let reps = i.samples.iter().map(Module::to_rep).collect::<Result<Vec<_>, _>>()?;
            let v = proj_inj_special_check(inst, &reps)?;
            Ok((to_value(&v), v.ok))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleInput {
    module: Module,
}

#[derive(Serialize, Deserialize)]
struct SymbolicInput {
    value: ModValue,
}

#[derive(Serialize, Deserialize)]
struct SecondInput {
    module: Module,
    partner: Option<Module>,
    morphism: Option<Vec<QMat>>,
}

#[derive(Serialize, Deserialize)]
struct ClosureInput {
    /// Two comodules with a morphism and an extension cocycle between them.
    m: Module,
    n: Module,
    phi: Vec<QMat>,
    ext: Vec<Rat>,
    /// Two arbitrary modules, a vector generating a submodule of the first, and a cocycle.
    a: Module,
    a2: Module,
    vertex: usize,
    vector: Vec<Rat>,
    a_ext: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct AdjunctionInput {
    m: Module,
    a: Module,
    c: Module,
    b: Module,
}

#[derive(Serialize, Deserialize)]
struct LambdaInput {
    module: KronRep,
    p1: QMat,
    p2: QMat,
}

#[derive(Serialize, Deserialize)]
struct FlatInput {
    budget: usize,
    corpus: Vec<FPModPID>,
}

#[derive(Serialize, Deserialize)]
struct EndRingInput {
    levels: usize,
    samples: usize,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct ProjInjInput {
    samples: Vec<Module>,
}

/// Rebuilds a morphism read from JSON. A matrix without rows loses its column count in the
/// row-list encoding, so empty components are restored from the dimensions.
fn morphism(comps: Vec<QMat>, m: &Rep, n: &Rep) -> Result<Morphism, FunctorError> {
    if comps.len() != m.dims.len() {
        return Err(FunctorError::Precondition("morphism has the wrong number of components".into()));
    }
    let comps: Vec<QMat> = comps
        .into_iter()
        .enumerate()
        .map(|(v, c)| if c.rows() * c.cols() == 0 { QMat::zeros(n.dims[v], m.dims[v]) } else { c })
        .collect();
    if comps.iter().enumerate().any(|(v, c)| c.shape() != (n.dims[v], m.dims[v])) {
        return Err(FunctorError::Precondition("morphism components do not match the dimensions".into()));
    }
    Ok(Morphism { comps })
}

fn mod_value(m: &Module) -> Result<ModValue, FunctorError> {
    match m {
        Module::Pid(p) => Ok(ModValue::FiniteDim { module: FinMod::Pid(p.clone()) }),
        other => Ok(ModValue::fin(&other.to_rep()?)),
    }
}

fn check_five(inst: &EpiInstance, i: ModuleInput, side: FiveSide) -> Checked {
    let ft = five_term_check(inst, &mod_value(&i.module)?, side)?;
    let out = json!({
        "terms": ft.terms,
        "stable_exact": ft.stable_exact,
        "levels_checked": ft.levels_checked,
        "levels_exact": ft.levels_exact,
        "symbolic_part": ft.symbolic_part,
    });
    Ok((out, ft.exact))
}

/// All Prüfer sums and adic products with total multiplicity `≤ max_mult` over at most two
/// of the instance's points, in a fixed order.
pub fn symbolic_corpus(inst: &EpiInstance, max_mult: usize) -> Vec<ModValue> {
    let poles = inst.poles();
    let mut mults: Vec<BTreeMap<Rat, usize>> = vec![BTreeMap::new()];
    for (i, a) in poles.iter().enumerate() {
        for t in 1..=max_mult {
            mults.push(BTreeMap::from([(a.clone(), t)]));
            for b in &poles[i + 1..] {
                for u in 1..=max_mult - t {
                    mults.push(BTreeMap::from([(a.clone(), t), (b.clone(), u)]));
                }
            }
        }
    }
    mults
        .iter()
        .flat_map(|m| [ModValue::prufer(m.clone()), ModValue::adic(m.clone(), None)])
        .collect()
}

/// A second comodule with a nonzero morphism into it when one turns up in a few draws.
/// A partner and a nonzero morphism into it. The source is redrawn until nonzero; if no
/// random partner receives a nonzero map, the identity of the source is used.
fn nonzero_morphism(rng: &mut impl Rng, inst: &EpiInstance, b: usize, m: &mut Rep) -> (Rep, Morphism) {
    while m.is_zero() {
        *m = gen::comodule(rng, inst, b);
    }
    for _ in 0..5 {
        let m2 = gen::comodule(rng, inst, b);
        let phi = gen::random_morphism(rng, m, &m2);
        if !phi.is_zero() {
            return (m2, phi);
        }
    }
    (m.clone(), Morphism::identity(m))
}

fn check_second(inst: &EpiInstance, i: SecondInput) -> Checked {
    let m = i.module.to_rep()?;
    let mut pass = true;
    let mut trips = Vec::new();
    for order in [MatlisOrder::DeltaFirst, MatlisOrder::GammaFirst] {
        let rt = second_matlis_roundtrip(inst, &m, order)?;
        pass &= rt.ok && rt.natural;
        trips.push(json!({ "order": order, "ok": rt.ok, "natural": rt.natural, "witness": rt.witness, "intermediate": rt.intermediate }));
    }
    let mut squares = Vec::new();
    if let (Some(p), Some(comps)) = (&i.partner, &i.morphism) {
        let m2 = p.to_rep()?;
        let phi = morphism(comps.clone(), &m, &m2)?;
        for order in [MatlisOrder::DeltaFirst, MatlisOrder::GammaFirst] {
            let n = second_matlis_naturality(inst, &m, &m2, &phi, order)?;
            pass &= n.holds();
            squares.push(json!({ "order": order, "squares": n }));
        }
    }
    Ok((json!({ "roundtrips": trips, "naturality": squares }), pass))
}

fn check_agreement(inst: &EpiInstance, i: ModuleInput) -> Checked {
    let m = i.module.to_rep()?;
    let d = classify(inst, &m, Path::Definitional)?;
    let s = classify(inst, &m, Path::Structural)?;
    let disagree = d.disagreements(&s);
    // away from the point 0, finite comodules and contramodules have g invertible
    let zero_in = inst.points().contains(&Point::int(0));
    let g_ok = !inst.is_kron() || zero_in || !(s.comodule || s.contramodule) || m.maps[1].is_invertible();
    let out = json!({ "definitional": d, "structural": s, "disagreements": disagree, "g_invertible_ok": g_ok });
    Ok((out, disagree.is_empty() && g_ok))
}

fn cocycle_len(m: &Rep, n: &Rep) -> usize {
    m.quiver.arrows().iter().map(|&(s, t)| m.dims[s] * n.dims[t]).sum()
}

fn in_class(inst: &EpiInstance, m: &Rep) -> Result<ClassFlags, FunctorError> {
    classify(inst, m, Path::Definitional)
}

/// `sub` closed under the arrows of `m`, starting from one vector.
fn generated(m: &Rep, v: usize, vector: &[Rat]) -> Vec<QMat> {
    let mut sub: Vec<QMat> = m.dims.iter().map(|&d| QMat::zeros(d, 0)).collect();
    sub[v] = QMat::column(vector.to_vec()).column_space();
    loop {
        let mut grown = false;
        for (a, &(s, t)) in m.quiver.arrows().iter().enumerate() {
            let next = sub[t].hstack(&m.maps[a].mul(&sub[s])).column_space();
            if next.cols() > sub[t].cols() {
                sub[t] = next;
                grown = true;
            }
        }
        if !grown {
            return sub;
        }
    }
}

fn check_closure(inst: &EpiInstance, i: ClosureInput) -> Checked {
    let (m, n) = (i.m.to_rep()?, i.n.to_rep()?);
    let phi = morphism(i.phi, &m, &n)?;
    if !m.is_morphism(&n, &phi) || i.ext.len() != cocycle_len(&m, &n) {
        return Err(FunctorError::Precondition("closure input is not a morphism with a cocycle".into()));
    }
    let mut out = serde_json::Map::new();
    let mut pass = true;
    let derived = [
        ("kernel", phi.kernel(&m).0),
        ("cokernel", phi.cokernel(&n).0),
        ("extension", extension(&m, &n, &i.ext)),
        ("sum", m.direct_sum(&n)),
    ];
    for (name, x) in &derived {
        let f = in_class(inst, x)?;
        pass &= f.comodule && f.contramodule;
        out.insert(name.to_string(), json!({ "comodule": f.comodule, "contramodule": f.contramodule }));
    }
    // the special class is closed under quotients and extensions, the cospecial class under
    // submodules and extensions
    let (a, a2) = (i.a.to_rep()?, i.a2.to_rep()?);
    let (sub, _) = a.subrep(&generated(&a, i.vertex, &i.vector));
    let (quo, _) = a.quotient(&generated(&a, i.vertex, &i.vector));
    let e = extension(&a, &a2, &i.a_ext);
    let (fa, fa2) = (in_class(inst, &a)?, in_class(inst, &a2)?);
    let (fs, fq, fe) = (in_class(inst, &sub)?, in_class(inst, &quo)?, in_class(inst, &e)?);
    let shadow = [
        ("quotient_special", !fa.special || fq.special),
        ("submodule_cospecial", !fa.cospecial || fs.cospecial),
        ("extension_special", !(fa.special && fa2.special) || fe.special),
        ("extension_cospecial", !(fa.cospecial && fa2.cospecial) || fe.cospecial),
    ];
    for (name, ok) in shadow {
        pass &= ok;
        out.insert(name.into(), json!(ok));
    }
    out.insert("ext_dim".into(), json!(hom_ext(&m, &n).ext.dim()));
    Ok((Value::Object(out), pass))
}

fn check_lambda(inst: &EpiInstance, i: LambdaInput) -> Checked {
    let conj = i.module.conjugate(&RepMap::new(i.p1, i.p2))?;
    let mut pass = true;
    let mut out = serde_json::Map::new();
    for side in [BlockSide::Comodule, BlockSide::Contramodule] {
        let a = lambda_decompose(inst, &i.module, side)?;
        let b = lambda_decompose(inst, &conj, side)?;
        let locals = a.components.values().chain(b.components.values()).all(|c| c.local);
        let invariant = a
            .components
            .iter()
            .all(|(p, c)| b.components.get(p).is_some_and(|d| are_isomorphic(&c.module, &d.module)));
        pass &= a.reassembles && b.reassembles && locals && invariant;
        out.insert(
            format!("{side:?}").to_lowercase(),
            json!({
                "dims": a.dims().iter().map(|(p, d)| (p.to_string(), d)).collect::<BTreeMap<_, _>>(),
                "reassembles": a.reassembles && b.reassembles,
                "local": locals,
                "conjugation_invariant": invariant,
            }),
        );
    }
    Ok((Value::Object(out), pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_instance;

    fn spec(s: SuiteName, inst: &str, samples: usize, bound: usize) -> SuiteSpec {
        SuiteSpec::new(s, parse_instance(inst).unwrap(), 1, samples, bound)
    }

    #[test]
    fn zero_samples_pass_vacuously_with_a_warning() {
        let r = run_suite(&spec(SuiteName::ClassifyAgreement, "kron:inf", 0, 3)).unwrap();
        assert!(r.summary.pass && r.cases.is_empty());
        assert!(!r.summary.warnings.is_empty());
    }

    #[test]
    fn reports_are_deterministic_and_replay() {
        let s = spec(SuiteName::ClassifyAgreement, "kron:inf,2", 6, 3);
        let (a, b) = (run_suite(&s).unwrap(), run_suite(&s).unwrap());
        let strip = |r: &Report| r.cases.iter().map(|c| serde_json::to_string(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        for c in &a.cases {
            let again = replay(&s, c).unwrap();
            assert_eq!(again.verdict, c.verdict);
            assert_eq!(again.output, c.output);
        }
    }

    #[test]
    fn second_equivalence_suite_passes_on_the_localization_family() {
        let r = run_suite(&spec(SuiteName::SecondMatlis, "cpid:0", 6, 6).with_morphisms(3)).unwrap();
        assert!(r.summary.pass, "{}", r.to_human());
    }

    #[test]
    fn flatness_suite_reports_a_witness_over_the_kronecker_family() {
        let r = run_suite(&spec(SuiteName::FlatnessDichotomy, "kron:inf", 1, 3)).unwrap();
        assert!(r.summary.pass, "{}", r.to_human());
        assert_eq!(r.cases[0].output["outcome"], "witness");
    }

    #[test]
    fn symbolic_corpus_counts() {
        // multiplicity maps over one point: 1 + 5; over two points: 1 + 5 + 5 + 10
        assert_eq!(symbolic_corpus(&EpiInstance::cpid(&[0]), 5).len(), 2 * 6);
        assert_eq!(symbolic_corpus(&EpiInstance::cpid(&[0, 1]), 5).len(), 2 * 21);
    }

    #[test]
    fn malformed_inputs_are_errors_not_passes() {
        let s = spec(SuiteName::ClassifyAgreement, "kron:inf", 1, 3);
        let inst = s.validate().unwrap();
        let c = run_case(&s, &inst, 0, json!({ "module": { "loop": [[1]] } }));
        assert!(matches!(c.verdict, Verdict::Error { .. }));
        let c = run_case(&s, &inst, 0, json!({ "nothing": 1 }));
        assert!(matches!(c.verdict, Verdict::Error { .. }));
    }
}
