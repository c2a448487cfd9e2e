//! JSON forms of patterns, verdicts and reports.

use num_bigint::BigUint;
use serde_json::{json, Value};
use shiftlab::cellspace::{CellSet, Space};
use shiftlab::entropy::EntropyValue;
use shiftlab::goe::{Consistency, GoeReport, InjectivityVerdict, PreInjectivityVerdict, SurjectivityVerdict};
use shiftlab::pattern::{Alphabet, Pattern};

/// `"<start>:<word>"` for contiguous line patterns, otherwise `"<cell>:<symbol> …"`.
pub fn pattern_text(space: &dyn Space, alphabet: &Alphabet, p: &Pattern) -> String {
    if space.is_line() && !p.is_empty() {
        let w = p.line_word(space);
        let contiguous = w.windows(2).all(|x| x[1].0 == x[0].0 + 1);
        if contiguous {
            let values: Vec<u8> = w.iter().map(|e| e.1).collect();
            return format!("{}:{}", w[0].0, alphabet.format_word(&values));
        }
        return w
            .iter()
            .map(|&(z, v)| format!("{z}:{}", alphabet.name(v)))
            .collect::<Vec<_>>()
            .join(" ");
    }
    p.display(space, alphabet)
}

pub fn cells_text(space: &dyn Space, set: &CellSet) -> String {
    set.format(space).join(" ")
}

pub fn entropy_value(v: EntropyValue) -> Value {
    match v {
        EntropyValue::Empty => json!("empty"),
        EntropyValue::Finite(x) => json!(x),
    }
}

pub fn big(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

pub fn goe_report(space: &dyn Space, domain: &Alphabet, codomain: &Alphabet, r: &GoeReport) -> Value {
    let h = &r.hypotheses;
    let surjectivity = match &r.surjectivity {
        SurjectivityVerdict::SurjectiveUpTo { rho, exactness } => {
            json!({ "verdict": "surjective-up-to", "rho": rho, "exactness": exactness.to_string() })
        }
        SurjectivityVerdict::GardenOfEden { pattern, rho, exactness } => json!({
            "verdict": "goe-pattern",
            "rho": rho,
            "pattern": pattern_text(space, codomain, pattern),
            "exactness": exactness.to_string(),
        }),
    };
    let pre_injectivity = match &r.pre_injectivity {
        PreInjectivityVerdict::PreInjectiveUpTo { r, exactness } => {
            json!({ "verdict": "pre-injective-up-to", "r": r, "exactness": exactness.to_string() })
        }
        PreInjectivityVerdict::Erasable { first, second, core, r, exactness } => json!({
            "verdict": "erasable-pair",
            "r": r,
            "core": cells_text(space, core),
            "first": pattern_text(space, domain, first),
            "second": pattern_text(space, domain, second),
            "exactness": exactness.to_string(),
        }),
    };
    let injectivity = match &r.injectivity {
        InjectivityVerdict::Witness { first, second, image, period } => json!({
            "verdict": "not-injective",
            "period": period,
            "first": pattern_text(space, domain, first),
            "second": pattern_text(space, domain, second),
            "image": pattern_text(space, codomain, image),
        }),
        InjectivityVerdict::NoPeriodicWitness { period } => json!({ "verdict": "no-periodic-witness-up-to", "period": period }),
        InjectivityVerdict::Injective => json!({ "verdict": "injective" }),
        InjectivityVerdict::Unsupported(why) => json!({ "verdict": "unsupported", "reason": why }),
    };
    json!({
        "map": r.map_id,
        "hypotheses": {
            "non_empty": h.non_empty,
            "finite_type": h.finite_type,
            "amenable": h.amenable,
            "strongly_irreducible": h.strongly_irreducible,
            "domain_entropy": h.domain_entropy.map(entropy_value),
            "codomain_entropy": h.codomain_entropy.map(entropy_value),
            "entropy_parity": h.entropy_parity(),
            "entropy_tolerance": h.entropy_tolerance,
            "log_base": "2",
        },
        "surjectivity": surjectivity,
        "pre_injectivity": pre_injectivity,
        "injectivity": injectivity,
        "bounds": { "rho_max": r.bounds.rho_max, "r_max": r.bounds.r_max, "max_period": r.bounds.max_period },
        "consistency": match r.consistency {
            Consistency::Consistent => "consistent",
            Consistency::OutOfHypothesis => "out-of-hypothesis",
            Consistency::Violation => "violation",
        },
    })
}
