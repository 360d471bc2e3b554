use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use matlis::classify::blocks::{lambda_decompose, BlockSide};
use matlis::classify::{classify, pid_divisors, Path};
use matlis::functor::FunctorError;
use matlis::instances::{EpiInstance, InstanceDesc, Target};
use matlis::quiver::{pencil_decompose, pencil_profile, KronRep};

use crate::gen::Module;

#[derive(Debug, Deserialize)]
pub struct Entity {
    pub instance: InstanceDesc,
    #[serde(default)]
    pub module: Option<Module>,
}

/// The first few level dimensions of `K` for an instance.
pub fn describe_instance(inst: &EpiInstance, levels: usize) -> Value {
    let dims: Vec<Vec<Vec<usize>>> = (1..=levels).map(|n| inst.truncate(Target::KAsLeftRModule, n).dims()).collect();
    json!({ "instance": inst.desc(), "k_level_dims": dims })
}

/// Normal form, class flags on both paths, block decomposition and dimension data.
pub fn describe(inst: &EpiInstance, m: &Module) -> Result<Value, FunctorError> {
    let rep = m.to_rep()?;
    let structural = classify(inst, &rep, Path::Structural)?;
    let definitional = classify(inst, &rep, Path::Definitional)?;
    let mut out = json!({
        "instance": inst.desc(),
        "dims": rep.dims,
        "zero": rep.is_zero(),
        "flags": structural,
        "definitional_flags": definitional,
    });
    if inst.is_kron() {
        let k = KronRep::from_rep(&rep);
        out["normal_form"] = match pencil_decompose(&k) {
            Ok(b) => json!({ "blocks": b.blocks }),
            Err(_) => {
                let p = pencil_profile(&k)?;
                json!({ "blocks": p.blocks(), "irrational_dim": p.irrational_dim })
            }
        };
        if structural.comodule {
            let d = lambda_decompose(inst, &k, BlockSide::Comodule)?;
            let dims: BTreeMap<String, (usize, usize)> = d.dims().into_iter().map(|(p, v)| (p.to_string(), v)).collect();
            out["blocks"] = json!(dims);
        }
    } else {
        out["divisors"] = json!(pid_divisors(&rep.maps[0]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use matlis::exact::{Poly, QMat};
    use matlis::quiver::{standard_reps, Point, StdRep};

    #[test]
    fn regular_block_at_infinity() {
        let inst = EpiInstance::kron(&[]);
        let m = Module::Kron(standard_reps(&StdRep::Regular(Point::Infinity, 2)).unwrap());
        let d = describe(&inst, &m).unwrap();
        assert_eq!(d["flags"]["comodule"], true);
        assert_eq!(d["blocks"]["inf"], json!([2, 2]));
    }

    #[test]
    fn square_zero_presentation() {
        let inst = EpiInstance::cpid(&[0]);
        let m = Module::Loop(QMat::from_ints(2, 2, &[0, 1, 0, 0]));
        let d = describe(&inst, &m).unwrap();
        assert_eq!(d["divisors"], json!([Poly::x().pow(2)]));
        assert_eq!(d["flags"]["contramodule"], true);
    }

    #[test]
    fn zero_module() {
        let inst = EpiInstance::kron(&[2]);
        let d = describe(&inst, &Module::Kron(KronRep::zero())).unwrap();
        assert_eq!(d["zero"], true);
        assert_eq!(d["blocks"], json!({ "2": [0, 0], "inf": [0, 0] }));
    }
}
