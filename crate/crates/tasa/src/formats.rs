//! JSON shapes for certificates, verdicts, models, and reports.
//!
//! Set-algebra elements serialize as lowercase hex bitmask strings over
//! the unit's point space, byte 0 (points 0..8) first. Units serialize as
//! either the string `"square"` or an explicit array of point indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use tasa_core::bits::Bits;
use tasa_core::decide::{Countermodel, Method, UnknownReason, ValidityResult};
use tasa_core::free::FreeStats;
use tasa_core::kripke::KripkeModel;
use tasa_core::perm::{AxiomId, ProofTrace, SigKind};
use tasa_core::rep::{
    NonVarietyCertificate, NonVarietyVariant, SmallAlgebraMethod, SmallAlgebraVerdict,
};
use tasa_core::set::{AlgebraDesc, UnitSpec};

pub fn sig_name(kind: SigKind) -> &'static str {
    kind.name()
}

pub fn parse_sig(name: &str) -> Option<SigKind> {
    match name.to_ascii_uppercase().as_str() {
        "TA" => Some(SigKind::Ta),
        "SA" => Some(SigKind::Sa),
        "SAD" => Some(SigKind::Sad),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum UnitJson {
    Named(String),
    Points(Vec<usize>),
}

/// `{"dim": n, "base": u, "unit": [...]|"square", "signature": ...}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraJson {
    pub dim: usize,
    pub base: usize,
    pub unit: UnitJson,
    pub signature: String,
}

impl From<&AlgebraDesc> for AlgebraJson {
    fn from(desc: &AlgebraDesc) -> Self {
        AlgebraJson {
            dim: desc.dim,
            base: desc.base,
            unit: match &desc.unit {
                UnitSpec::Square => UnitJson::Named("square".to_string()),
                UnitSpec::Points(v) => UnitJson::Points(v.clone()),
            },
            signature: desc.kind.name().to_string(),
        }
    }
}

impl AlgebraJson {
    pub fn to_desc(&self) -> Option<AlgebraDesc> {
        let unit = match &self.unit {
            UnitJson::Named(s) if s == "square" => UnitSpec::Square,
            UnitJson::Named(_) => return None,
            UnitJson::Points(v) => UnitSpec::Points(v.clone()),
        };
        Some(AlgebraDesc {
            dim: self.dim,
            base: self.base,
            unit,
            kind: parse_sig(&self.signature)?,
        })
    }
}

/// Points of a set encoded as a hex bitmask over `width` points.
pub fn hexmask(width: usize, points: &[usize]) -> String {
    Bits::from_indices(width, points).to_hex()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountermodelJson {
    pub algebra: AlgebraJson,
    /// Variable name (`x0`, `x1`, ...) to hex bitmask.
    pub assignment: BTreeMap<String, String>,
    pub witness: usize,
}

impl CountermodelJson {
    pub fn from_core(cm: &Countermodel, width: usize) -> Self {
        let mut assignment = BTreeMap::new();
        for (v, points) in &cm.assignment {
            assignment.insert(format!("x{v}"), hexmask(width, points));
        }
        CountermodelJson {
            algebra: AlgebraJson::from(&cm.algebra),
            assignment,
            witness: cm.witness,
        }
    }
}

/// `{"status": ..., "method": ..., "countermodel": ...|null, "seed": ...}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: String,
    pub method: String,
    pub countermodel: Option<CountermodelJson>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Point-space width of the countermodel's algebra, for mask encoding.
fn cm_width(cm: &Countermodel) -> usize {
    let mut w: usize = 1;
    for _ in 0..cm.algebra.dim {
        w = w.saturating_mul(cm.algebra.base);
    }
    w
}

pub fn verdict_json(result: &ValidityResult, seed: u64) -> VerdictJson {
    match result {
        ValidityResult::Valid { method } => VerdictJson {
            status: "valid".to_string(),
            method: method.wire_name().to_string(),
            countermodel: None,
            seed,
            detail: None,
        },
        ValidityResult::Invalid {
            method,
            countermodel,
        } => VerdictJson {
            status: "invalid".to_string(),
            method: method.wire_name().to_string(),
            countermodel: Some(CountermodelJson::from_core(
                countermodel,
                cm_width(countermodel),
            )),
            seed,
            detail: None,
        },
        ValidityResult::Unknown { reason } => {
            let (method, detail) = match reason {
                UnknownReason::Budget { needed, cap } => (
                    Method::NormalForm.wire_name(),
                    format!("budget: {needed} decorated variables exceed cap {cap}"),
                ),
                UnknownReason::SampledClean { samples, seed } => (
                    Method::Sampled.wire_name(),
                    format!("sampled-clean: {samples} samples, seed {seed}"),
                ),
            };
            VerdictJson {
                status: "unknown".to_string(),
                method: method.to_string(),
                countermodel: None,
                seed,
                detail: Some(detail),
            }
        }
    }
}

/// `{"dim": n, "base": u, "unit": [...], "valuation": {"p0": mask, ...}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelJson {
    pub dim: usize,
    pub base: usize,
    pub unit: Vec<usize>,
    pub valuation: BTreeMap<String, String>,
    pub witness: usize,
}

pub fn model_json(model: &KripkeModel, witness: usize) -> ModelJson {
    let alg = model.algebra();
    let width = alg.unit().points();
    let mut valuation = BTreeMap::new();
    for (p, set) in model.valuation() {
        let points: Vec<usize> = set.bits().iter_ones().collect();
        valuation.insert(format!("p{p}"), hexmask(width, &points));
    }
    ModelJson {
        dim: alg.dim(),
        base: alg.unit().base(),
        unit: alg.unit().membership().iter_ones().collect(),
        valuation,
        witness,
    }
}

/// `{"alphabet": k, "atoms": 2^k, "cardinality_log2_log2": k}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreeStatsJson {
    pub alphabet: usize,
    pub atoms: u64,
    pub cardinality_log2_log2: usize,
}

impl From<&FreeStats> for FreeStatsJson {
    fn from(s: &FreeStats) -> Self {
        FreeStatsJson {
            alphabet: s.alphabet,
            atoms: s.atom_count,
            cardinality_log2_log2: s.cardinality_log2_log2,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceStepJson {
    pub axiom: u8,
    pub pos: usize,
    pub word: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceJson {
    pub start: String,
    pub end: String,
    pub steps: Vec<TraceStepJson>,
}

pub fn trace_json(trace: &ProofTrace) -> TraceJson {
    TraceJson {
        start: trace.start.to_string(),
        end: trace.end.to_string(),
        steps: trace
            .steps
            .iter()
            .map(|s| TraceStepJson {
                axiom: match s.axiom {
                    AxiomId::Involution => 4,
                    AxiomId::Commute => 5,
                    AxiomId::Braid => 6,
                },
                pos: s.pos,
                word: s.word.to_string(),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmallAlgebraVerdictJson {
    pub k: usize,
    pub method: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonVarietyJson {
    pub n: usize,
    pub construction: String,
    pub unit: AlgebraJson,
    /// Image sequence of the permutation `f`.
    pub f: Vec<usize>,
    pub x: Vec<usize>,
    pub sf_equals_complement: bool,
    pub small_algebras: Vec<SmallAlgebraVerdictJson>,
    pub succeeded: bool,
}

pub fn non_variety_json(cert: &NonVarietyCertificate) -> NonVarietyJson {
    let method_name = |v: &SmallAlgebraVerdict| match &v.method {
        SmallAlgebraMethod::Exhaustive { assignments } => {
            format!("exhaustive({assignments} assignments)")
        }
        SmallAlgebraMethod::ConstantPoint { point, samples } => {
            format!("constant-point({point}) + {samples} samples")
        }
    };
    NonVarietyJson {
        n: cert.n,
        construction: match cert.variant {
            NonVarietyVariant::IndicatorEven => "indicator-even".to_string(),
            NonVarietyVariant::SymmetricOdd => "symmetric-odd".to_string(),
        },
        unit: AlgebraJson::from(&cert.unit),
        f: cert.f.images().to_vec(),
        x: cert.x_points.clone(),
        sf_equals_complement: cert.sf_equals_complement,
        small_algebras: cert
            .small_algebras
            .iter()
            .map(|v| SmallAlgebraVerdictJson {
                k: v.k,
                method: method_name(v),
                holds: v.holds,
            })
            .collect(),
        succeeded: cert.succeeded(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tasa_core::config::Config;
    use tasa_core::term::{parse_equation, Signature};

    #[test]
    fn algebra_json_round_trip() {
        let desc = AlgebraDesc {
            dim: 2,
            base: 2,
            unit: UnitSpec::Points(vec![1, 2]),
            kind: SigKind::Ta,
        };
        let json = AlgebraJson::from(&desc);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"unit\":[1,2]"));
        let back: AlgebraJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_desc().unwrap(), desc);

        let sq = AlgebraDesc {
            dim: 2,
            base: 2,
            unit: UnitSpec::Square,
            kind: SigKind::Sad,
        };
        let text = serde_json::to_string(&AlgebraJson::from(&sq)).unwrap();
        assert!(text.contains("\"unit\":\"square\""));
        let back: AlgebraJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_desc().unwrap(), sq);
    }

    #[test]
    fn verdict_json_schema() {
        let config = Config::default();
        let sig = Signature::ta(2).unwrap();
        let eq = parse_equation("s[0,1] x0 = x0", &sig).unwrap();
        let res = tasa_core::decide::decide_equation(&eq, &sig, &config).unwrap();
        let v = verdict_json(&res, config.seed);
        assert_eq!(v.status, "invalid");
        assert_eq!(v.method, "normal-form");
        let cm = v.countermodel.as_ref().unwrap();
        assert_eq!(cm.algebra.signature, "TA");
        // X0 = {(0,1)} = point 2 of 4 -> mask 0b0100 -> "04"
        assert_eq!(cm.assignment["x0"], "04");
        assert_eq!(cm.witness, 2);
    }
}
