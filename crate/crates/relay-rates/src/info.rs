//! Exact entropy and mutual information over finite-alphabet joint pmfs.
//!
//! A [`JointPmf`] stores a dense, normalized distribution over a named tuple
//! of finite alphabets in row-major order (last declared axis fastest). All
//! information quantities are in bits; probabilities below [`PROB_FLOOR`]
//! are treated as exact zeros so `0 log 0 = 0` never produces a NaN.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::{Error, Result};

/// Probabilities below this are treated as exact zeros.
pub const PROB_FLOOR: f64 = 1e-15;
/// Normalization tolerance for a pmf.
pub const NORM_TOL: f64 = 1e-12;
/// Dense-storage cap on the product of alphabet sizes.
pub const MAX_CELLS: usize = 10_000_000;

/// A set of variable names selecting axes of a [`JointPmf`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VarSet(BTreeSet<String>);

impl VarSet {
    pub fn of(names: &[&str]) -> Self {
        VarSet(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn empty() -> Self {
        VarSet(BTreeSet::new())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn intersection_first<'a>(&'a self, other: &'a VarSet) -> Option<&'a str> {
        self.0.intersection(&other.0).next().map(String::as_str)
    }
}

impl<const N: usize> From<[&str; N]> for VarSet {
    fn from(names: [&str; N]) -> Self {
        VarSet::of(&names)
    }
}

/// Dense joint pmf over named finite alphabets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointPmf {
    axes: Vec<(String, usize)>,
    probs: Vec<f64>,
}

impl JointPmf {
    /// Validates and wraps a dense probability table.
    pub fn new(axes: Vec<(String, usize)>, probs: Vec<f64>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut cells: usize = 1;
        for (name, size) in &axes {
            if !seen.insert(name.clone()) {
                return Err(Error::Normalization(format!("duplicate variable `{name}`")));
            }
            if *size == 0 {
                return Err(Error::Normalization(format!("empty alphabet for `{name}`")));
            }
            cells = cells.saturating_mul(*size);
        }
        if cells > MAX_CELLS {
            return Err(Error::Size(cells, MAX_CELLS));
        }
        if probs.len() != cells {
            return Err(Error::Normalization(format!(
                "expected {cells} probabilities, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| **p < 0.0 || !p.is_finite()) {
            return Err(Error::Normalization(format!("invalid probability {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(format!("entries sum to {sum}")));
        }
        Ok(JointPmf { axes, probs })
    }

    pub fn axes(&self) -> &[(String, usize)] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn variables(&self) -> VarSet {
        VarSet(self.axes.iter().map(|(n, _)| n.clone()).collect())
    }

    fn axis_position(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn check_subset(&self, vars: &VarSet) -> Result<()> {
        for name in vars.iter() {
            self.axis_position(name)?;
        }
        Ok(())
    }

    /// Row-major strides of the declared axes (last axis fastest).
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.axes.len()];
        for i in (0..self.axes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.axes[i + 1].1;
        }
        strides
    }

    /// Marginal over `keep`, axes in the declared order of `self`.
    pub fn marginalize(&self, keep: &VarSet) -> Result<JointPmf> {
        self.check_subset(keep)?;
        let kept: Vec<usize> = (0..self.axes.len())
            .filter(|i| keep.contains(&self.axes[*i].0))
            .collect();
        let kept_axes: Vec<(String, usize)> = kept.iter().map(|&i| self.axes[i].clone()).collect();
        let mut kept_strides = vec![1usize; kept.len()];
        for i in (0..kept.len().saturating_sub(1)).rev() {
            kept_strides[i] = kept_strides[i + 1] * kept_axes[i + 1].1;
        }
        let cells: usize = kept_axes.iter().map(|(_, s)| s).product();
        let mut out = vec![0.0f64; cells.max(1)];
        let strides = self.strides();
        for (flat, p) in self.probs.iter().enumerate() {
            let mut idx = 0usize;
            for (k, &axis) in kept.iter().enumerate() {
                let coord = (flat / strides[axis]) % self.axes[axis].1;
                idx += coord * kept_strides[k];
            }
            out[idx] += p;
        }
        JointPmf::new(kept_axes, out)
    }

    /// Shannon entropy of the full table, in bits.
    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|p| **p > PROB_FLOOR)
            .map(|p| -p * p.log2())
            .sum()
    }

    /// Entropy of the marginal on `vars` (0 for the empty set).
    pub fn entropy_of(&self, vars: &VarSet) -> Result<f64> {
        if vars.is_empty() {
            return Ok(0.0);
        }
        Ok(self.marginalize(vars)?.entropy())
    }

    /// Conditional mutual information I(A;B|C) in bits.
    ///
    /// `a`, `b`, `c` must be pairwise disjoint subsets of the axes. Values
    /// within floating-point noise of zero are clamped to exactly 0.
    pub fn conditional_mutual_information(
        &self,
        a: &VarSet,
        b: &VarSet,
        c: &VarSet,
    ) -> Result<f64> {
        for (x, y) in [(a, b), (a, c), (b, c)] {
            if let Some(name) = x.intersection_first(y) {
                return Err(Error::OverlappingSets(name.to_string()));
            }
        }
        self.check_subset(a)?;
        self.check_subset(b)?;
        self.check_subset(c)?;
        let h_ac = self.entropy_of(&a.union(c))?;
        let h_bc = self.entropy_of(&b.union(c))?;
        let h_abc = self.entropy_of(&a.union(b).union(c))?;
        let h_c = self.entropy_of(c)?;
        let mi = h_ac + h_bc - h_abc - h_c;
        debug_assert!(mi > -1e-9, "conditional MI came out {mi}");
        Ok(if mi < 0.0 { 0.0 } else { mi })
    }

    /// Unconditional mutual information I(A;B).
    pub fn mutual_information(&self, a: &VarSet, b: &VarSet) -> Result<f64> {
        self.conditional_mutual_information(a, b, &VarSet::empty())
    }
}

/// A conditional probability block p(output | given), dense and row-major
/// over `given ++ output`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Conditional {
    given: Vec<(String, usize)>,
    output: Vec<(String, usize)>,
    probs: Vec<f64>,
}

impl Conditional {
    /// Validates that every given-combination slice is a pmf over the outputs.
    pub fn new(
        given: Vec<(String, usize)>,
        output: Vec<(String, usize)>,
        probs: Vec<f64>,
    ) -> Result<Self> {
        let n_given: usize = given.iter().map(|(_, s)| s).product();
        let n_out: usize = output.iter().map(|(_, s)| s).product();
        if output.is_empty() || n_out == 0 {
            return Err(Error::Normalization("conditional with no outputs".into()));
        }
        if probs.len() != n_given * n_out {
            return Err(Error::Normalization(format!(
                "expected {} conditional entries, got {}",
                n_given * n_out,
                probs.len()
            )));
        }
        for g in 0..n_given {
            let slice = &probs[g * n_out..(g + 1) * n_out];
            if let Some(p) = slice.iter().find(|p| **p < 0.0 || !p.is_finite()) {
                return Err(Error::Normalization(format!("invalid probability {p}")));
            }
            let sum: f64 = slice.iter().sum();
            if (sum - 1.0).abs() > NORM_TOL {
                return Err(Error::Normalization(format!(
                    "conditional slice {g} sums to {sum}"
                )));
            }
        }
        Ok(Conditional {
            given,
            output,
            probs,
        })
    }

    pub fn given(&self) -> &[(String, usize)] {
        &self.given
    }

    pub fn output(&self) -> &[(String, usize)] {
        &self.output
    }

    fn value(&self, given_coords: &[usize], out_coords: &[usize]) -> f64 {
        let mut idx = 0usize;
        for (i, &(_, size)) in self.given.iter().enumerate() {
            idx = idx * size + given_coords[i];
        }
        for (i, &(_, size)) in self.output.iter().enumerate() {
            idx = idx * size + out_coords[i];
        }
        self.probs[idx]
    }
}

/// Assembles the product distribution of independent input marginals, a
/// channel block and a compression block into one joint pmf.
///
/// The joint's axis order is: input variables in the order given, then the
/// channel outputs, then the compression outputs. Every `given` variable of
/// the two conditional blocks must already be present at that point.
pub fn factorized_pmf(
    inputs: &[JointPmf],
    channel: &Conditional,
    compression: &Conditional,
) -> Result<JointPmf> {
    let mut axes: Vec<(String, usize)> = Vec::new();
    for pmf in inputs {
        for ax in pmf.axes() {
            if axes.iter().any(|(n, _)| n == &ax.0) {
                return Err(Error::Factorization(format!(
                    "variable `{}` declared twice",
                    ax.0
                )));
            }
            axes.push(ax.clone());
        }
    }
    for block in [channel, compression] {
        for (name, size) in block.given() {
            match axes.iter().find(|(n, _)| n == name) {
                None => return Err(Error::UnknownVariable(name.clone())),
                Some((_, s)) if s != size => {
                    return Err(Error::Factorization(format!(
                        "alphabet mismatch for `{name}`: {s} vs {size}"
                    )))
                }
                _ => {}
            }
        }
        for ax in block.output() {
            if axes.iter().any(|(n, _)| n == &ax.0) {
                return Err(Error::Factorization(format!(
                    "variable `{}` declared twice",
                    ax.0
                )));
            }
            axes.push(ax.clone());
        }
    }

    let cells: usize = axes.iter().map(|(_, s)| s).product();
    if cells > MAX_CELLS {
        return Err(Error::Size(cells, MAX_CELLS));
    }
    let positions = |names: &[(String, usize)]| -> Vec<usize> {
        names
            .iter()
            .map(|(n, _)| axes.iter().position(|(a, _)| a == n).unwrap())
            .collect()
    };
    let input_pos: Vec<Vec<usize>> = inputs.iter().map(|p| positions(p.axes())).collect();
    let input_strides: Vec<Vec<usize>> = inputs.iter().map(|p| p.strides()).collect();
    let ch_given = positions(channel.given());
    let ch_out = positions(channel.output());
    let co_given = positions(compression.given());
    let co_out = positions(compression.output());

    let sizes: Vec<usize> = axes.iter().map(|(_, s)| *s).collect();
    let mut coords = vec![0usize; axes.len()];
    let mut probs = Vec::with_capacity(cells);
    for _ in 0..cells {
        let mut p = 1.0f64;
        for (i, pmf) in inputs.iter().enumerate() {
            let flat: usize = input_pos[i]
                .iter()
                .zip(&input_strides[i])
                .map(|(&axis, stride)| coords[axis] * stride)
                .sum();
            p *= pmf.probs()[flat];
        }
        let gather = |pos: &[usize]| -> Vec<usize> { pos.iter().map(|&i| coords[i]).collect() };
        p *= channel.value(&gather(&ch_given), &gather(&ch_out));
        p *= compression.value(&gather(&co_given), &gather(&co_out));
        probs.push(p);
        for axis in (0..coords.len()).rev() {
            coords[axis] += 1;
            if coords[axis] < sizes[axis] {
                break;
            }
            coords[axis] = 0;
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(format!(
            "assembled product sums to {sum}"
        )));
    }
    for p in &mut probs {
        *p /= sum;
    }
    JointPmf::new(axes, probs)
}

/// Marginal pmf over a single named variable.
pub fn scalar_pmf(name: &str, probs: Vec<f64>) -> Result<JointPmf> {
    let size = probs.len();
    JointPmf::new(vec![(name.to_string(), size)], probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pmf(rng: &mut ChaCha8Rng, axes: Vec<(String, usize)>) -> JointPmf {
        let cells: usize = axes.iter().map(|(_, s)| s).product();
        let mut raw: Vec<f64> = (0..cells).map(|_| -rng.gen::<f64>().ln()).collect();
        let sum: f64 = raw.iter().sum();
        raw.iter_mut().for_each(|p| *p /= sum);
        JointPmf::new(axes, raw).unwrap()
    }

    fn ax(spec: &[(&str, usize)]) -> Vec<(String, usize)> {
        spec.iter().map(|(n, s)| (n.to_string(), *s)).collect()
    }

    #[test]
    fn marginalize_uniform_and_diagonal() {
        let uniform = JointPmf::new(ax(&[("x", 2), ("y", 2)]), vec![0.25; 4]).unwrap();
        let mx = uniform.marginalize(&VarSet::of(&["x"])).unwrap();
        assert_eq!(mx.probs(), &[0.5, 0.5]);

        let diag = JointPmf::new(ax(&[("x", 2), ("y", 2)]), vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let mx = diag.marginalize(&VarSet::of(&["x"])).unwrap();
        assert_eq!(mx.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn marginalize_keep_all_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pmf = random_pmf(&mut rng, ax(&[("a", 2), ("b", 3), ("c", 2)]));
        let kept = pmf.marginalize(&VarSet::of(&["a", "b", "c"])).unwrap();
        for (p, q) in pmf.probs().iter().zip(kept.probs()) {
            assert!((p - q).abs() < 1e-15);
        }
    }

    #[test]
    fn marginal_consistency_under_partial_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pmf = random_pmf(&mut rng, ax(&[("a", 3), ("b", 2), ("c", 4)]));
        let direct = pmf.marginalize(&VarSet::of(&["b"])).unwrap();
        let via = pmf
            .marginalize(&VarSet::of(&["a", "b"]))
            .unwrap()
            .marginalize(&VarSet::of(&["b"]))
            .unwrap();
        for (p, q) in direct.probs().iter().zip(via.probs()) {
            assert!((p - q).abs() < 1e-14);
        }
    }

    #[test]
    fn unknown_variable_is_reported() {
        let uniform = JointPmf::new(ax(&[("x", 2)]), vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            uniform.marginalize(&VarSet::of(&["z"])),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn overlapping_sets_are_rejected() {
        let uniform = JointPmf::new(ax(&[("x", 2), ("y", 2)]), vec![0.25; 4]).unwrap();
        let err = uniform.conditional_mutual_information(
            &VarSet::of(&["x"]),
            &VarSet::of(&["x", "y"]),
            &VarSet::empty(),
        );
        assert!(matches!(err, Err(Error::OverlappingSets(_))));
    }

    #[test]
    fn mi_of_independent_and_identical_binary() {
        let uniform = JointPmf::new(ax(&[("x", 2), ("y", 2)]), vec![0.25; 4]).unwrap();
        let mi = uniform
            .mutual_information(&VarSet::of(&["x"]), &VarSet::of(&["y"]))
            .unwrap();
        assert!(mi.abs() < 1e-12);

        let diag = JointPmf::new(ax(&[("x", 2), ("y", 2)]), vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let mi = diag
            .mutual_information(&VarSet::of(&["x"]), &VarSet::of(&["y"]))
            .unwrap();
        assert!((mi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mi_of_binary_symmetric_channel() {
        // X uniform through BSC(0.11): I(X;Y) = 1 - H2(0.11).
        let p = 0.11f64;
        let probs = vec![
            0.5 * (1.0 - p),
            0.5 * p,
            0.5 * p,
            0.5 * (1.0 - p),
        ];
        let pmf = JointPmf::new(ax(&[("x", 2), ("y", 2)]), probs).unwrap();
        let mi = pmf
            .mutual_information(&VarSet::of(&["x"]), &VarSet::of(&["y"]))
            .unwrap();
        let h2 = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        assert!((mi - (1.0 - h2)).abs() < 1e-13);
        assert!((mi - 0.500_083_7).abs() < 5e-7);
    }

    #[test]
    fn chain_rule_on_random_pmfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let pmf = random_pmf(&mut rng, ax(&[("a", 2), ("b", 2), ("c", 3), ("d", 2)]));
            let lhs = pmf
                .conditional_mutual_information(
                    &VarSet::of(&["a"]),
                    &VarSet::of(&["b", "c"]),
                    &VarSet::of(&["d"]),
                )
                .unwrap();
            let rhs = pmf
                .conditional_mutual_information(
                    &VarSet::of(&["a"]),
                    &VarSet::of(&["b"]),
                    &VarSet::of(&["d"]),
                )
                .unwrap()
                + pmf
                    .conditional_mutual_information(
                        &VarSet::of(&["a"]),
                        &VarSet::of(&["c"]),
                        &VarSet::of(&["b", "d"]),
                    )
                    .unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "chain rule off by {}", lhs - rhs);
        }
    }

    #[test]
    fn data_processing_on_constructed_markov_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            // X -> Y -> Z with random component distributions
            let px: Vec<f64> = {
                let a: f64 = rng.gen_range(0.05..0.95);
                vec![a, 1.0 - a]
            };
            let mut joint = vec![0.0f64; 8];
            let pyx: Vec<[f64; 2]> = (0..2)
                .map(|_| {
                    let a: f64 = rng.gen_range(0.05..0.95);
                    [a, 1.0 - a]
                })
                .collect();
            let pzy: Vec<[f64; 2]> = (0..2)
                .map(|_| {
                    let a: f64 = rng.gen_range(0.05..0.95);
                    [a, 1.0 - a]
                })
                .collect();
            for x in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        joint[4 * x + 2 * y + z] = px[x] * pyx[x][y] * pzy[y][z];
                    }
                }
            }
            let pmf = JointPmf::new(ax(&[("x", 2), ("y", 2), ("z", 2)]), joint).unwrap();
            let ixz = pmf
                .mutual_information(&VarSet::of(&["x"]), &VarSet::of(&["z"]))
                .unwrap();
            let ixy = pmf
                .mutual_information(&VarSet::of(&["x"]), &VarSet::of(&["y"]))
                .unwrap();
            assert!(ixz <= ixy + 1e-10);
        }
    }

    #[test]
    fn factorized_pmf_degenerate_and_uniform() {
        // deterministic components collapse to a point mass
        let px = scalar_pmf("x", vec![1.0, 0.0]).unwrap();
        let chan = Conditional::new(ax(&[("x", 2)]), ax(&[("y", 2)]), vec![1.0, 0.0, 0.0, 1.0])
            .unwrap();
        let comp = Conditional::new(ax(&[("y", 2)]), ax(&[("h", 2)]), vec![1.0, 0.0, 0.0, 1.0])
            .unwrap();
        let joint = factorized_pmf(&[px], &chan, &comp).unwrap();
        assert_eq!(joint.probs()[0], 1.0);
        assert!(joint.probs()[1..].iter().all(|p| *p == 0.0));

        // all-uniform components give the uniform joint
        let px = scalar_pmf("x", vec![0.5, 0.5]).unwrap();
        let chan =
            Conditional::new(ax(&[("x", 2)]), ax(&[("y", 2)]), vec![0.5; 4]).unwrap();
        let comp = Conditional::new(ax(&[("y", 2)]), ax(&[("h", 2)]), vec![0.5; 4]).unwrap();
        let joint = factorized_pmf(&[px], &chan, &comp).unwrap();
        assert!(joint.probs().iter().all(|p| (p - 0.125).abs() < 1e-15));
    }

    #[test]
    fn factorized_pmf_input_marginal_is_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p1 = random_pmf(&mut rng, ax(&[("x1", 2)]));
        let p2 = random_pmf(&mut rng, ax(&[("x2", 2)]));
        let chan_raw: Vec<f64> = {
            let mut v = Vec::new();
            for _ in 0..4 {
                let a: f64 = rng.gen_range(0.05..0.95);
                v.extend_from_slice(&[a, 1.0 - a]);
            }
            v
        };
        let chan =
            Conditional::new(ax(&[("x1", 2), ("x2", 2)]), ax(&[("y", 2)]), chan_raw).unwrap();
        let comp_raw: Vec<f64> = {
            let mut v = Vec::new();
            for _ in 0..2 {
                let a: f64 = rng.gen_range(0.05..0.95);
                v.extend_from_slice(&[a, 1.0 - a]);
            }
            v
        };
        let comp = Conditional::new(ax(&[("y", 2)]), ax(&[("h", 2)]), comp_raw).unwrap();
        let joint = factorized_pmf(&[p1.clone(), p2.clone()], &chan, &comp).unwrap();

        // brute-force marginal over (x1, x2) must equal the product of inputs
        let marg = joint.marginalize(&VarSet::of(&["x1", "x2"])).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let got = marg.probs()[2 * i + j];
                let want = p1.probs()[i] * p2.probs()[j];
                assert!((got - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn non_normalized_conditional_is_rejected() {
        let bad = Conditional::new(ax(&[("x", 2)]), ax(&[("y", 2)]), vec![0.7, 0.7, 0.5, 0.5]);
        assert!(matches!(bad, Err(Error::Normalization(_))));
    }

    #[test]
    fn oversized_pmf_is_rejected() {
        let axes = ax(&[("a", 4000), ("b", 4000)]);
        let res = JointPmf::new(axes, vec![]);
        assert!(matches!(res, Err(Error::Size(_, _))));
    }

    #[test]
    fn json_round_trip_matches_declared_format() {
        let pmf = JointPmf::new(ax(&[("x1", 2), ("y", 2)]), vec![0.25; 4]).unwrap();
        let json = serde_json::to_string(&pmf).unwrap();
        assert!(json.contains("\"axes\":[[\"x1\",2],[\"y\",2]]"));
        assert!(json.contains("\"probs\":[0.25,0.25,0.25,0.25]"));
        let back: JointPmf = serde_json::from_str(&json).unwrap();
        assert_eq!(back.axes(), pmf.axes());
    }
}
