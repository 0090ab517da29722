//! Achievable-rate constraints of compress-forward strategies on discrete
//! memoryless one-way and two-way relay channels.
//!
//! Every operation takes a fixed factorized input distribution and returns
//! the per-distribution rate bounds and feasibility of one scheme; searching
//! over distributions is the caller's concern. Bounds are clamped at zero in
//! [`SchemeRates`], with the raw values retained in `active_constraints`.
//! An infeasible compression-rate constraint yields the empty region (both
//! bounds zero, `feasible = false`, violated constraint named).

use serde::{Deserialize, Serialize};

use crate::info::{factorized_pmf, Conditional, JointPmf, VarSet};
use crate::{Error, Result};

pub mod sample;

/// Equality tolerance for the Theorem-6 style strictness checks, in bits.
pub const EQ_TOL: f64 = 1e-9;

/// One named constraint or bound expression, raw (unclamped) value in bits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub value: f64,
}

/// Rate bounds of one scheme on one distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeRates {
    /// Clamped bound on R1 (the only rate for one-way schemes); 0 if infeasible.
    pub r1_bound: f64,
    /// Clamped bound on R2; 0 for one-way schemes.
    pub r2_bound: f64,
    pub feasible: bool,
    pub active_constraints: Vec<Constraint>,
}

impl SchemeRates {
    fn named(&self, name: &str) -> Option<f64> {
        self.active_constraints
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.value)
    }

    /// Raw (unclamped) R1 bound as retained in the constraint list.
    pub fn r1_raw(&self) -> f64 {
        self.named("r1_raw").unwrap_or(self.r1_bound)
    }

    /// Raw (unclamped) R2 bound as retained in the constraint list.
    pub fn r2_raw(&self) -> f64 {
        self.named("r2_raw").unwrap_or(self.r2_bound)
    }

    /// Value of a named constraint expression.
    pub fn constraint(&self, name: &str) -> Option<f64> {
        self.named(name)
    }
}

fn clamp(x: f64) -> f64 {
    x.max(0.0)
}

fn constraint(name: &str, value: f64) -> Constraint {
    Constraint {
        name: name.to_string(),
        value,
    }
}

const FACTOR_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// one-way relay channel
// ---------------------------------------------------------------------------

/// Factorized joint over (x, xr, y, yr, yh) with independent inputs and a
/// compression block that depends only on (yr, xr).
#[derive(Debug, Clone)]
pub struct OneWayDistribution {
    joint: JointPmf,
}

pub const ONEWAY_VARS: [&str; 5] = ["x", "xr", "y", "yr", "yh"];

impl OneWayDistribution {
    /// Assembles the distribution from its factors.
    pub fn from_components(
        input: &JointPmf,
        relay_input: &JointPmf,
        channel: &Conditional,
        compression: &Conditional,
    ) -> Result<Self> {
        let joint = factorized_pmf(
            &[input.clone(), relay_input.clone()],
            channel,
            compression,
        )?;
        Self::from_joint(joint)
    }

    /// Wraps an existing joint pmf, verifying the factorization structure.
    pub fn from_joint(joint: JointPmf) -> Result<Self> {
        check_vars(&joint, &ONEWAY_VARS)?;
        let i_inputs = joint.mutual_information(&VarSet::of(&["x"]), &VarSet::of(&["xr"]))?;
        if i_inputs > FACTOR_TOL {
            return Err(Error::Factorization(format!(
                "inputs x and xr are dependent: I = {i_inputs}"
            )));
        }
        let leak = joint.conditional_mutual_information(
            &VarSet::of(&["yh"]),
            &VarSet::of(&["x", "y"]),
            &VarSet::of(&["xr", "yr"]),
        )?;
        if leak > FACTOR_TOL {
            return Err(Error::Factorization(format!(
                "compression depends on more than (yr, xr): I = {leak}"
            )));
        }
        Ok(OneWayDistribution { joint })
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }
}

fn check_vars(joint: &JointPmf, expected: &[&str]) -> Result<()> {
    for name in expected {
        if !joint.axes().iter().any(|(n, _)| n == name) {
            return Err(Error::Factorization(format!("missing variable `{name}`")));
        }
    }
    if joint.axes().len() != expected.len() {
        return Err(Error::Factorization(format!(
            "expected exactly the variables {expected:?}"
        )));
    }
    Ok(())
}

/// Mutual-information shorthand over a fixed joint.
macro_rules! mi {
    ($joint:expr, [$($a:literal),+] ; [$($b:literal),+]) => {
        $joint.conditional_mutual_information(
            &VarSet::of(&[$($a),+]), &VarSet::of(&[$($b),+]), &VarSet::empty())?
    };
    ($joint:expr, [$($a:literal),+] ; [$($b:literal),+] | [$($c:literal),+]) => {
        $joint.conditional_mutual_information(
            &VarSet::of(&[$($a),+]), &VarSet::of(&[$($b),+]), &VarSet::of(&[$($c),+]))?
    };
}

/// Compress-forward without binning, joint decoding of message and
/// compression index.
///
/// Rate: `min{ I(X,Xr;Y) - I(Yh;Yr|X,Xr,Y), I(X;Y,Yh|Xr) }`, achievable when
/// `I(Xr;Y) + I(Yh;X,Y|Xr) >= I(Yh;Yr|Xr)`.
pub fn oneway_cf_nobinning(d: &OneWayDistribution) -> Result<SchemeRates> {
    let j = d.joint();
    let first = mi!(j, ["x", "xr"]; ["y"]) - mi!(j, ["yh"]; ["yr"] | ["x", "xr", "y"]);
    let second = mi!(j, ["x"]; ["y", "yh"] | ["xr"]);
    let rate = first.min(second);
    let slack = mi!(j, ["xr"]; ["y"]) + mi!(j, ["yh"]; ["x", "y"] | ["xr"])
        - mi!(j, ["yh"]; ["yr"] | ["xr"]);
    let feasible = slack >= -EQ_TOL;
    let mut constraints = vec![
        constraint("two_step_first", first),
        constraint("two_step_second", second),
        constraint("r1_raw", rate),
        constraint("index_decoding_slack", slack),
    ];
    if !feasible {
        constraints.push(constraint("violated:index_decoding", slack));
    }
    Ok(SchemeRates {
        r1_bound: if feasible { clamp(rate) } else { 0.0 },
        r2_bound: 0.0,
        feasible,
        active_constraints: constraints,
    })
}

/// Original compress-forward (Wyner-Ziv binning, successive decoding).
///
/// Reports both equivalent characterizations: the unconstrained 2-step
/// min-form and the 3-step form `I(X;Y,Yh|Xr)` subject to
/// `I(Xr;Y) >= I(Yh;Yr|Xr,Y)`.
pub fn oneway_cf_original(d: &OneWayDistribution) -> Result<SchemeRates> {
    let j = d.joint();
    let first = mi!(j, ["x", "xr"]; ["y"]) - mi!(j, ["yh"]; ["yr"] | ["x", "xr", "y"]);
    let second = mi!(j, ["x"]; ["y", "yh"] | ["xr"]);
    let two_step = first.min(second);
    let three_step = second;
    let slack = mi!(j, ["xr"]; ["y"]) - mi!(j, ["yh"]; ["yr"] | ["xr", "y"]);
    let three_step_feasible = slack >= -EQ_TOL;
    Ok(SchemeRates {
        r1_bound: clamp(two_step),
        r2_bound: 0.0,
        feasible: true,
        active_constraints: vec![
            constraint("two_step_first", first),
            constraint("two_step_second", second),
            constraint("r1_raw", two_step),
            constraint("three_step_bound", three_step),
            constraint("bin_decoding_slack", slack),
            constraint(
                "three_step_rate",
                if three_step_feasible {
                    clamp(three_step)
                } else {
                    0.0
                },
            ),
        ],
    })
}

// ---------------------------------------------------------------------------
// two-way relay channel
// ---------------------------------------------------------------------------

/// Factorized joint over (x1, x2, xr, y1, y2, yr, yh) with three independent
/// inputs and compression depending only on (xr, yr).
#[derive(Debug, Clone)]
pub struct TwoWayDistribution {
    joint: JointPmf,
    terms: TwoWayTerms,
}

pub const TWOWAY_VARS: [&str; 7] = ["x1", "x2", "xr", "y1", "y2", "yr", "yh"];

/// The mutual-information expressions shared by all two-way schemes.
#[derive(Debug, Clone, Copy)]
struct TwoWayTerms {
    /// I(X1;Y2,Yh|X2,Xr)
    a1: f64,
    /// I(X1,Xr;Y2|X2) - I(Yh;Yr|X1,X2,Xr,Y2)
    b1: f64,
    /// I(X2;Y1,Yh|X1,Xr)
    a2: f64,
    /// I(X2,Xr;Y1|X1) - I(Yh;Yr|X1,X2,Xr,Y1)
    b2: f64,
    /// I(Yh;Yr|X1,X2,Xr,Y1), I(Yh;Yr|X1,X2,Xr,Y2)
    pen1: f64,
    pen2: f64,
    /// I(Xr;Y1|X1), I(Xr;Y2|X2)
    link1: f64,
    link2: f64,
    /// I(Yh;Yr|X1,Xr,Y1), I(Yh;Yr|X2,Xr,Y2) (binning-side penalties)
    bin_pen1: f64,
    bin_pen2: f64,
    /// I(Yh;Y1|Xr), I(Yh;Y2|Xr)
    hat_y1: f64,
    hat_y2: f64,
    /// I(Xr;Y1|X1,X2)
    link1_both: f64,
}

impl TwoWayDistribution {
    pub fn from_components(
        input1: &JointPmf,
        input2: &JointPmf,
        relay_input: &JointPmf,
        channel: &Conditional,
        compression: &Conditional,
    ) -> Result<Self> {
        let joint = factorized_pmf(
            &[input1.clone(), input2.clone(), relay_input.clone()],
            channel,
            compression,
        )?;
        Self::from_joint(joint)
    }

    pub fn from_joint(joint: JointPmf) -> Result<Self> {
        check_vars(&joint, &TWOWAY_VARS)?;
        let inputs = joint.marginalize(&VarSet::of(&["x1", "x2", "xr"]))?;
        let dep = inputs.entropy_of(&VarSet::of(&["x1"]))?
            + inputs.entropy_of(&VarSet::of(&["x2"]))?
            + inputs.entropy_of(&VarSet::of(&["xr"]))?
            - inputs.entropy();
        if dep > FACTOR_TOL {
            return Err(Error::Factorization(format!(
                "inputs x1, x2, xr are dependent: total correlation {dep}"
            )));
        }
        let leak = joint.conditional_mutual_information(
            &VarSet::of(&["yh"]),
            &VarSet::of(&["x1", "x2", "y1", "y2"]),
            &VarSet::of(&["xr", "yr"]),
        )?;
        if leak > FACTOR_TOL {
            return Err(Error::Factorization(format!(
                "compression depends on more than (xr, yr): I = {leak}"
            )));
        }
        let terms = TwoWayTerms::evaluate(&joint)?;
        Ok(TwoWayDistribution { joint, terms })
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }
}

impl TwoWayTerms {
    fn evaluate(j: &JointPmf) -> Result<Self> {
        let pen1 = mi!(j, ["yh"]; ["yr"] | ["x1", "x2", "xr", "y1"]);
        let pen2 = mi!(j, ["yh"]; ["yr"] | ["x1", "x2", "xr", "y2"]);
        Ok(TwoWayTerms {
            a1: mi!(j, ["x1"]; ["y2", "yh"] | ["x2", "xr"]),
            b1: mi!(j, ["x1", "xr"]; ["y2"] | ["x2"]) - pen2,
            a2: mi!(j, ["x2"]; ["y1", "yh"] | ["x1", "xr"]),
            b2: mi!(j, ["x2", "xr"]; ["y1"] | ["x1"]) - pen1,
            pen1,
            pen2,
            link1: mi!(j, ["xr"]; ["y1"] | ["x1"]),
            link2: mi!(j, ["xr"]; ["y2"] | ["x2"]),
            bin_pen1: mi!(j, ["yh"]; ["yr"] | ["x1", "xr", "y1"]),
            bin_pen2: mi!(j, ["yh"]; ["yr"] | ["x2", "xr", "y2"]),
            hat_y1: mi!(j, ["yh"]; ["y1"] | ["xr"]),
            hat_y2: mi!(j, ["yh"]; ["y2"] | ["xr"]),
            link1_both: mi!(j, ["xr"]; ["y1"] | ["x1", "x2"]),
        })
    }
}

fn scheme_rates(r1_raw: f64, r2_raw: f64, feasible: bool, mut extra: Vec<Constraint>) -> SchemeRates {
    let mut constraints = vec![
        constraint("r1_raw", r1_raw),
        constraint("r2_raw", r2_raw),
    ];
    constraints.append(&mut extra);
    SchemeRates {
        r1_bound: if feasible { clamp(r1_raw) } else { 0.0 },
        r2_bound: if feasible { clamp(r2_raw) } else { 0.0 },
        feasible,
        active_constraints: constraints,
    }
}

/// Two-way CF without binning, joint decoding (per-message min of the joint
/// and cooperative bounds, subject to both compression-index constraints).
pub fn twrc_cf_nobinning(d: &TwoWayDistribution) -> Result<SchemeRates> {
    let t = &d.terms;
    let feasible = t.pen1 <= t.link1 + EQ_TOL && t.pen2 <= t.link2 + EQ_TOL;
    let mut extra = vec![
        constraint("index_slack_1", t.link1 - t.pen1),
        constraint("index_slack_2", t.link2 - t.pen2),
    ];
    if t.pen1 > t.link1 + EQ_TOL {
        extra.push(constraint("violated:index_decoding_1", t.link1 - t.pen1));
    }
    if t.pen2 > t.link2 + EQ_TOL {
        extra.push(constraint("violated:index_decoding_2", t.link2 - t.pen2));
    }
    Ok(scheme_rates(
        t.a1.min(t.b1),
        t.a2.min(t.b2),
        feasible,
        extra,
    ))
}

/// Original two-way CF (binning, 3-step successive decoding): joint-decoding
/// bounds only, subject to the weakest-link compression constraint.
pub fn twrc_cf_original(d: &TwoWayDistribution) -> Result<SchemeRates> {
    let t = &d.terms;
    let slack = t.link1.min(t.link2) - t.bin_pen1.max(t.bin_pen2);
    let feasible = slack >= -EQ_TOL;
    let mut extra = vec![constraint("bin_slack", slack)];
    if !feasible {
        extra.push(constraint("violated:bin_decoding", slack));
    }
    Ok(scheme_rates(t.a1, t.a2, feasible, extra))
}

/// Noisy network coding: the Theorem-3 rate expressions with no constraint
/// on the compression rate.
pub fn twrc_nnc(d: &TwoWayDistribution) -> Result<SchemeRates> {
    let t = &d.terms;
    Ok(scheme_rates(t.a1.min(t.b1), t.a2.min(t.b2), true, vec![]))
}

/// Relaxed joint decoding without resolving compression indices, no message
/// repetition: the two boundary bounds are added with full weight.
pub fn twrc_relaxed_norepeat(d: &TwoWayDistribution) -> Result<SchemeRates> {
    relaxed(d, 1.0)
}

/// Relaxed joint decoding with each message repeated twice: the boundary
/// penalty terms are halved.
pub fn twrc_relaxed_repeat2(d: &TwoWayDistribution) -> Result<SchemeRates> {
    relaxed(d, 0.5)
}

fn relaxed(d: &TwoWayDistribution, weight: f64) -> Result<SchemeRates> {
    let t = &d.terms;
    let bracket1 = t.link2 - t.hat_y2;
    let bracket2 = t.link1 - t.hat_y1;
    let r1 = t.a1.min(t.b1).min(t.b1 + weight * bracket1);
    let r2 = t.a2.min(t.b2).min(t.b2 + weight * bracket2);
    Ok(scheme_rates(
        r1,
        r2,
        true,
        vec![
            constraint("boundary_bracket_1", bracket1),
            constraint("boundary_bracket_2", bracket2),
            constraint("boundary_bound_1", t.b1 + weight * bracket1),
            constraint("boundary_bound_2", t.b2 + weight * bracket2),
        ],
    ))
}

/// The two R2 diagnostics of simultaneous decoding over all blocks.
///
/// Returns `(with last index decoded, last index ignored)`; the first is the
/// tighter of the two. Both arise from the block-boundary error events and
/// sit below the joint-decoding bound `I(X2;Y1,Yh|X1,Xr)` minus/plus the
/// residual terms shown in their derivations.
pub fn twrc_simultaneous_bounds(d: &TwoWayDistribution) -> Result<(f64, f64)> {
    let t = &d.terms;
    let strict = t.a2 - t.pen1;
    let relaxed = t.a2 + t.link1_both - t.pen1;
    Ok((strict, relaxed))
}

/// Necessary condition for the original CF region to equal the no-binning
/// region: equal relay links and equal binning penalties for both users,
/// within [`EQ_TOL`] bits.
pub fn theorem6_necessary_condition(d: &TwoWayDistribution) -> Result<bool> {
    let t = &d.terms;
    Ok((t.link1 - t.link2).abs() <= EQ_TOL && (t.bin_pen1 - t.bin_pen2).abs() <= EQ_TOL)
}
