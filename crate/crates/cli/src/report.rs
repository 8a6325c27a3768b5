//! Text and JSON-lines renderings of core results. Every numeral is an exact
//! rational; decimal renderings sit under `display_only`.

use std::fmt::{Display, Write as _};

use pars_core::asymptotics::{Classification, LimitBound, MeanTimeBound};
use pars_core::checkers::{CheckVerdict, Observation, Witness};
use pars_core::engine::RewriteTrace;
use pars_core::prob::{fmt_decimal, fmt_rational};
use pars_core::{Prob, Rational};
use serde::{Deserialize, Serialize};

/// One line of a trace. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub resolver: String,
    /// Canonical multidistribution, e.g. `[1/2 c, 1/2 true]`.
    pub state: String,
    /// Normal-form part, e.g. `{true: 1/2}`.
    pub nf: String,
    pub nnorm: String,
    /// `Σ_{n<step} (1 - nnorm_n)`.
    pub meantime: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_only: Option<Decimals>,
}

/// Rounded renderings; never read back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decimals {
    pub nnorm: String,
    pub meantime: String,
}

pub fn trace_records<E: Ord + Clone + Display>(trace: &RewriteTrace<E>, decimal: Option<usize>) -> Vec<TraceRecord> {
    let mut meantime: Rational = Prob::zero().into_rational();
    let mut out = Vec::with_capacity(trace.states.len());
    for (step, state) in trace.states.iter().enumerate() {
        let nnorm = &trace.nnorm[step];
        out.push(TraceRecord {
            step,
            resolver: trace.resolver.clone(),
            state: state.to_string(),
            nf: trace.nf[step].to_string(),
            nnorm: nnorm.to_string(),
            meantime: fmt_rational(&meantime),
            display_only: decimal
                .map(|d| Decimals { nnorm: fmt_decimal(nnorm.as_rational(), d), meantime: fmt_decimal(&meantime, d) }),
        });
        meantime += nnorm.complement().into_rational();
    }
    out
}

pub fn jsonl(records: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("plain strings serialize"));
        out.push('\n');
    }
    out
}

pub fn limit_line<E: Ord + Clone + Display>(label: &str, b: &LimitBound<E>) -> String {
    format!("{label} depth={} lower={} residual={} upper-mass={}", b.depth, b.lower, b.residual, fmt_rational(&b.upper_mass()))
}

pub fn meantime_report(m: &MeanTimeBound, resolver: &str, decimal: Option<usize>) -> String {
    let mut out = String::new();
    writeln!(out, "resolver {resolver}").unwrap();
    writeln!(out, "depth {}", m.depth).unwrap();
    writeln!(out, "partial {}", fmt_rational(&m.partial)).unwrap();
    if let Some(d) = decimal {
        writeln!(out, "partial-display-only {}", fmt_decimal(&m.partial, d)).unwrap();
    }
    writeln!(out, "divergence-witness {}", m.divergence_witness).unwrap();
    for (n, c) in m.contributions.iter().enumerate() {
        writeln!(out, "contribution {n} {c}").unwrap();
    }
    out
}

pub fn classification_report<E: Ord + Clone + Display>(c: &Classification<E>) -> String {
    let mut out = String::new();
    writeln!(out, "depth {}", c.depth).unwrap();
    writeln!(out, "truncated {}", c.truncated).unwrap();
    writeln!(out, "bounds {}", c.bound_count).unwrap();
    writeln!(out, "un {}", c.un.name()).unwrap();
    if let Some((a, b)) = &c.un_witness {
        writeln!(out, "{}", limit_line("un-witness", a)).unwrap();
        writeln!(out, "{}", limit_line("un-witness", b)).unwrap();
    }
    writeln!(out, "sn {}", c.sn.name()).unwrap();
    writeln!(out, "ast {}", c.ast.name()).unwrap();
    writeln!(out, "min-residual {}", c.min_residual).unwrap();
    writeln!(out, "max-residual {}", c.max_residual).unwrap();
    writeln!(out, "wn-best {}", c.wn_best).unwrap();
    writeln!(out, "greedy-nnorm {}", c.greedy_nnorm).unwrap();
    out
}

pub fn verdict_report<E: Ord + Clone + Display>(property: &str, obs: Observation, v: &CheckVerdict<E>) -> String {
    let mut out = String::new();
    writeln!(out, "property {property}").unwrap();
    writeln!(out, "observation {}", obs.name()).unwrap();
    writeln!(out, "depth {}", v.depth).unwrap();
    writeln!(out, "outcome {}", v.outcome.name()).unwrap();
    writeln!(out, "conclusive {}", v.conclusive).unwrap();
    writeln!(out, "truncated {}", v.truncated).unwrap();
    if let Some(w) = &v.witness {
        out.push_str(&witness_report(w));
    }
    out
}

pub fn witness_report<E: Ord + Clone + Display>(w: &Witness<E>) -> String {
    let mut out = String::new();
    writeln!(out, "witness {} step={}", w.kind.name(), w.step).unwrap();
    writeln!(out, "source {}", w.source).unwrap();
    writeln!(out, "left {} observed={}", w.left, w.left_obs).unwrap();
    writeln!(out, "right {} observed={}", w.right, w.right_obs).unwrap();
    out
}
