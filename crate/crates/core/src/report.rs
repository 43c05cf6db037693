//! JSON renderings of the engine's results.
//!
//! Key order is insertion order, and every list is produced in a fixed
//! order, so equal inputs give byte-identical documents. Missing sections are
//! left out rather than written as `null`.

use serde_json::{json, Map, Value};

use crate::algebra::{Element, StructureAlgebra, ValidationReport};
use crate::claims::ClaimResult;
use crate::file::rational_strings;
use crate::operators::{LinearOperator, OpWitness};
use crate::peirce::{Block, Faithfulness, PeirceContext, PeirceReport};

const MAX_LISTED_FAILURES: usize = 10;

/// A report under construction.
#[derive(Debug, Clone)]
pub struct Report {
    body: Map<String, Value>,
    failed: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut body = Map::new();
        body.insert("command".into(), json!(command));
        Report { body, failed: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.body.insert(key.to_string(), value);
    }

    /// Records a failed mathematical check by name.
    pub fn fail(&mut self, check: &str) {
        if !self.failed.iter().any(|c| c == check) {
            self.failed.push(check.to_string());
        }
    }

    pub fn passed(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn render(mut self, runtime_ms: Option<u128>) -> String {
        if !self.failed.is_empty() {
            let failed = std::mem::take(&mut self.failed);
            self.body.insert("failed_checks".into(), json!(failed));
        }
        if let Some(ms) = runtime_ms {
            self.body.insert("runtime_ms".into(), json!(ms));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(self.body)).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn element(e: &Element) -> Value {
    rational_strings(e.coords())
}

fn names(alg: &StructureAlgebra, idx: &[usize]) -> Value {
    json!(idx.iter().map(|&i| alg.basis_name(i)).collect::<Vec<_>>())
}

pub fn validation(alg: &StructureAlgebra, r: &ValidationReport) -> Value {
    let mut m = Map::new();
    m.insert("valid".into(), json!(r.is_valid()));
    m.insert("associative".into(), json!(r.associative));
    if let Some(w) = &r.associator_witness {
        m.insert("associator_witness".into(), json!({ "tuple": names(alg, &w.tuple), "value": element(&w.value) }));
    }
    if !r.is_valid() {
        m.insert("failure_count".into(), json!(r.failures.len()));
        let listed: Vec<Value> = r
            .failures
            .iter()
            .take(MAX_LISTED_FAILURES)
            .map(|f| {
                json!({
                    "axiom": f.axiom.label(),
                    "tuple": names(alg, &f.tuple),
                    "lhs": element(&f.lhs),
                    "rhs": element(&f.rhs),
                })
            })
            .collect();
        m.insert("failures".into(), Value::Array(listed));
        let suspects: Vec<Value> = r
            .suspect_entries
            .iter()
            .map(|s| {
                json!({
                    "entry": [alg.basis_name(s.left), alg.basis_name(s.right)],
                    "failed_checks": s.failed_checks,
                })
            })
            .collect();
        m.insert("suspect_entries".into(), Value::Array(suspects));
    }
    Value::Object(m)
}

pub fn hypotheses(idempotent: bool, faith: Option<&Faithfulness>) -> Value {
    let mut m = Map::new();
    m.insert("idempotent".into(), json!(idempotent));
    if let Some(f) = faith {
        m.insert("spade".into(), json!(f.spade));
        m.insert("club".into(), json!(f.club));
    }
    Value::Object(m)
}

pub fn faithfulness_witnesses(f: &Faithfulness) -> Option<Value> {
    let mut m = Map::new();
    if let Some(w) = &f.spade_witness {
        m.insert("spade_kernel_element".into(), element(w));
    }
    if let Some(w) = &f.club_witness {
        m.insert("club_kernel_element".into(), element(w));
    }
    (!m.is_empty()).then_some(Value::Object(m))
}

pub fn peirce(ctx: &PeirceContext<'_>, r: &PeirceReport) -> Value {
    let blocks: Map<String, Value> =
        Block::ALL.iter().map(|b| (b.to_string(), json!(ctx.block_basis(*b).dim()))).collect();
    let mut m = Map::new();
    m.insert("blocks".into(), Value::Object(blocks));
    m.insert("rules_hold".into(), json!(r.holds()));
    m.insert("random_checks".into(), json!(r.random_checks));
    if !r.failures.is_empty() {
        let failures: Vec<Value> = r
            .failures
            .iter()
            .take(MAX_LISTED_FAILURES)
            .map(|f| {
                json!({
                    "rule": f.rule.label(),
                    "blocks": [f.left.to_string(), f.right.to_string()],
                    "u": element(&f.u),
                    "v": element(&f.v),
                    "product": element(&f.product),
                })
            })
            .collect();
        m.insert("failures".into(), Value::Array(failures));
    }
    let products: Vec<Value> = r
        .nonzero_off_diagonal_products
        .iter()
        .map(|w| {
            json!({
                "block": w.block.to_string(),
                "u": element(&w.u),
                "v": element(&w.v),
                "product": element(&w.product),
            })
        })
        .collect();
    m.insert("nonzero_off_diagonal_products".into(), Value::Array(products));
    Value::Object(m)
}

pub fn claims(results: &[ClaimResult]) -> Value {
    Value::Array(
        results
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("id".into(), json!(c.id));
                m.insert("status".into(), json!(c.status.label()));
                m.insert("note".into(), json!(c.note));
                if let Some(w) = &c.witness {
                    m.insert("witness".into(), json!({ "at": w.at, "lhs": element(&w.lhs), "rhs": element(&w.rhs) }));
                }
                Value::Object(m)
            })
            .collect(),
    )
}

/// An operator as its list of basis images: entry `j` is `D(b_j)`.
pub fn operator(op: &LinearOperator) -> Value {
    Value::Array((0..op.dim()).map(|j| element(&op.image(j))).collect())
}

pub fn op_witness(alg: &StructureAlgebra, w: &OpWitness) -> Value {
    let args: Vec<String> = w.tuple.iter().map(|a| a.label(alg)).collect();
    json!({ "tuple": args, "lhs": element(&w.lhs), "rhs": element(&w.rhs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn absent_sections_are_omitted() {
        let mut r = Report::new("validate");
        r.set("inputs", json!({"file": "x.json"}));
        let text = r.render(None);
        assert!(!text.contains("null"));
        assert!(!text.contains("runtime_ms"));
        assert!(!text.contains("failed_checks"));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v.as_object().unwrap().keys().collect::<Vec<_>>(), ["command", "inputs"]);
    }

    #[test]
    fn failed_checks_are_listed_once() {
        let mut r = Report::new("peirce");
        r.fail("spade");
        r.fail("spade");
        assert!(!r.passed());
        let v: Value = serde_json::from_str(&r.render(Some(3))).unwrap();
        assert_eq!(v["failed_checks"], json!(["spade"]));
        assert_eq!(v["runtime_ms"], json!(3));
    }

    #[test]
    fn zorn_validation_lists_associator() {
        let z = catalog::zorn_algebra();
        let v = validation(&z, &z.validate());
        assert_eq!(v["valid"], json!(true));
        assert_eq!(v["associative"], json!(false));
        assert_eq!(v["associator_witness"]["tuple"].as_array().unwrap().len(), 3);
        assert!(v.get("failures").is_none());
    }
}
