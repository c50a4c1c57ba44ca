//! Fuzzy membership scoring and attribute aggregation.
//!
//! Every constraint is scored with the same ramp: an attribute `ap` measured
//! against its constraint `lambda` scores `ap / lambda` below the constraint
//! and `1` at or above it. A node or path is accepted when each score reaches
//! the matching membership threshold.
//!
//! Trust and intimacy are propagated multiplicatively along a path. Influence
//! is the arithmetic mean over the path's interior nodes; a direct edge has no
//! interior and aggregates to `1`.

use crate::error::{Error, Result};
use crate::graph_model::LabelId;

/// Output of the membership ramp, always in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MembershipScore(f64);

impl MembershipScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Membership constraint values: a score must be `>=` the threshold to pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub rho_vm: f64,
    pub trust_m: f64,
    pub intimacy_m: f64,
    pub influence_m: f64,
}

impl Thresholds {
    pub const DEFAULT_VALUE: f64 = 0.9;

    pub fn uniform(value: f64) -> Self {
        Thresholds {
            rho_vm: value,
            trust_m: value,
            intimacy_m: value,
            influence_m: value,
        }
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds::uniform(Self::DEFAULT_VALUE)
    }
}

/// Scores `ap` against constraint `lambda`.
pub fn membership(ap: f64, lambda: f64) -> Result<MembershipScore> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(lambda));
    }
    Ok(MembershipScore(ramp(ap, lambda)))
}

// `lambda` validated by the caller (pattern validation rejects zero).
#[inline]
pub(crate) fn ramp(ap: f64, lambda: f64) -> f64 {
    if ap < lambda {
        ap / lambda
    } else {
        1.0
    }
}

/// Sequential trust propagation: the product of the edge trusts.
pub fn aggregate_trust(edge_trusts: &[f64]) -> Result<f64> {
    product(edge_trusts, "trust")
}

/// Same operator as [`aggregate_trust`], applied to intimacy.
pub fn aggregate_intimacy(edge_intimacies: &[f64]) -> Result<f64> {
    product(edge_intimacies, "intimacy")
}

fn product(values: &[f64], what: &str) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Validation(format!(
            "{what} aggregation needs at least one edge"
        )));
    }
    Ok(values.iter().product())
}

/// Mean influence of the interior nodes; `1` for a direct edge.
pub fn aggregate_influence(intermediate_rhos: &[f64]) -> f64 {
    if intermediate_rhos.is_empty() {
        1.0
    } else {
        intermediate_rhos.iter().sum::<f64>() / intermediate_rhos.len() as f64
    }
}

/// Aggregated attributes of one data path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathAggregates {
    pub trust: f64,
    pub intimacy: f64,
    pub influence: f64,
}

impl PathAggregates {
    /// Smallest raw aggregate, the quantity maximised by path selection.
    pub fn min_attr(&self) -> f64 {
        self.trust.min(self.intimacy).min(self.influence)
    }
}

/// Node constraint of a pattern node, with labels resolved against a data graph.
///
/// `labels == None` means some required label does not occur in the data
/// graph at all, so no data node can satisfy the constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeConstraint {
    pub labels: Option<Vec<LabelId>>,
    pub lambda_rho_v: f64,
}

impl NodeConstraint {
    /// Label containment plus the influence membership test.
    #[inline]
    pub fn accepts(&self, labels: &[LabelId], rho: f64, thresholds: &Thresholds) -> bool {
        let Some(required) = &self.labels else {
            return false;
        };
        required.iter().all(|l| labels.contains(l))
            && ramp(rho, self.lambda_rho_v) >= thresholds.rho_vm
    }
}

/// Attribute constraints carried by a pattern edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeConstraint {
    pub lambda_trust: f64,
    pub lambda_intimacy: f64,
    pub lambda_influence: f64,
}

impl EdgeConstraint {
    #[inline]
    pub fn trust_ok(&self, trust: f64, thresholds: &Thresholds) -> bool {
        ramp(trust, self.lambda_trust) >= thresholds.trust_m
    }

    #[inline]
    pub fn intimacy_ok(&self, intimacy: f64, thresholds: &Thresholds) -> bool {
        ramp(intimacy, self.lambda_intimacy) >= thresholds.intimacy_m
    }

    #[inline]
    pub fn influence_ok(&self, influence: f64, thresholds: &Thresholds) -> bool {
        ramp(influence, self.lambda_influence) >= thresholds.influence_m
    }
}

/// Checks a data node against a resolved pattern-node constraint.
pub fn node_satisfies(
    constraint: &NodeConstraint,
    labels: &[LabelId],
    rho: f64,
    thresholds: &Thresholds,
) -> bool {
    constraint.accepts(labels, rho, thresholds)
}

/// All three path membership clauses.
pub fn path_satisfies(agg: &PathAggregates, edge: &EdgeConstraint, thresholds: &Thresholds) -> bool {
    edge.trust_ok(agg.trust, thresholds)
        && edge.intimacy_ok(agg.intimacy, thresholds)
        && edge.influence_ok(agg.influence, thresholds)
}
