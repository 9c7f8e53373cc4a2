//! AC-solvability verdicts for simple patterns.

use serde_json::{json, Value};

use crate::catalog::{by_size, CatalogName};
use crate::error::Result;
use crate::occurrence::{in_class, occurs, OccurrenceResult, DEFAULT_ORDER_CAP};
use crate::order::TotalOrder;
use crate::pattern::{Pattern, PatternName};

/// A maximal AC-solvable pattern, possibly with inverted orders.
#[derive(Debug, Clone)]
pub struct Maximal {
    pub label: String,
    pub pattern: Pattern,
}

/// The maximal patterns LX_lt, EMC, BTP_vo, BTP_do, BTX and BTI closed under
/// inverting the domain and variable orders, without isomorphic duplicates.
pub fn maximal_patterns() -> Vec<Maximal> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for name in [
        PatternName::LxLt,
        PatternName::Emc,
        PatternName::BtpVo,
        PatternName::BtpDo,
        PatternName::Btx,
        PatternName::Bti,
    ] {
        let base = Pattern::builtin(name);
        let variants = [
            (name.to_string(), base.clone()),
            (format!("invDom({name})"), base.inv_dom()),
            (format!("invVar({name})"), base.inv_var()),
            (format!("invVar(invDom({name}))"), base.inv_dom().inv_var()),
        ];
        for (label, pattern) in variants {
            if seen.insert(pattern.canonical_form()) {
                out.push(Maximal { label, pattern });
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub enum Classification {
    /// The pattern occurs in `maximal`, with one homomorphism per
    /// consistent linear extension of it.
    AcSolvable { maximal: Maximal, occurrence: OccurrenceResult },
    /// The pattern does not occur in the catalogue instance under `orders`.
    NotAcSolvable {
        instance: CatalogName,
        var_order: TotalOrder,
        dom_order: TotalOrder,
    },
    Unsupported { reason: String },
    /// Neither certificate was found.
    Unclassified,
}

impl Classification {
    pub fn verdict(&self) -> &'static str {
        match self {
            Classification::AcSolvable { .. } => "ac-solvable",
            Classification::NotAcSolvable { .. } => "not-ac-solvable",
            Classification::Unsupported { .. } => "unsupported",
            Classification::Unclassified => "unclassified",
        }
    }

    pub fn to_json_value(&self, p: &Pattern) -> Value {
        match self {
            Classification::AcSolvable { maximal, occurrence } => json!({
                "verdict": self.verdict(),
                "maximal": maximal.label,
                "occurrence": occurrence.to_json_value(p),
            }),
            Classification::NotAcSolvable {
                instance,
                var_order,
                dom_order,
            } => json!({
                "verdict": self.verdict(),
                "instance": instance.as_str(),
                "varOrder": var_order,
                "domOrder": dom_order,
            }),
            Classification::Unsupported { reason } => json!({ "verdict": self.verdict(), "reason": reason }),
            Classification::Unclassified => json!({ "verdict": self.verdict() }),
        }
    }
}

/// The first maximal pattern `p` occurs in, with the occurrence witness.
pub fn positive_certificate(p: &Pattern, maximal: &[Maximal]) -> Option<(Maximal, OccurrenceResult)> {
    maximal.iter().find_map(|m| {
        let r = occurs(p, &m.pattern);
        r.occurs().then(|| (m.clone(), r))
    })
}

/// The smallest catalogue instance in which `p` fails to occur under some
/// order pair.
pub fn negative_certificate(p: &Pattern, cap: u64) -> Result<Option<(CatalogName, TotalOrder, TotalOrder)>> {
    for ci in by_size() {
        if let Some((vo, dord)) = in_class(p, &ci.instance, cap)? {
            return Ok(Some((ci.name, vo, dord)));
        }
    }
    Ok(None)
}

pub fn classify(p: &Pattern) -> Result<Classification> {
    classify_with(p, &maximal_patterns(), DEFAULT_ORDER_CAP)
}

pub fn classify_with(p: &Pattern, maximal: &[Maximal], cap: u64) -> Result<Classification> {
    if !p.is_simple() {
        let reason = if !p.mergeable_pairs().is_empty() {
            "pattern has mergeable points"
        } else {
            "pattern has dangling points"
        };
        return Ok(Classification::Unsupported { reason: reason.into() });
    }
    if let Some((maximal, occurrence)) = positive_certificate(p, maximal) {
        return Ok(Classification::AcSolvable { maximal, occurrence });
    }
    Ok(match negative_certificate(p, cap)? {
        Some((instance, var_order, dom_order)) => Classification::NotAcSolvable {
            instance,
            var_order,
            dom_order,
        },
        None => Classification::Unclassified,
    })
}
