//! Exact few-boson propagation through small mode networks.
//!
//! This is the brute-force ground truth the analytic beamsplitter formulas
//! are checked against. States are occupation vectors over a handful of
//! modes, transforms are dense unitaries (lossy networks enter through their
//! dilation), and transition amplitudes follow the standard linear-optics
//! rule:
//!
//! ```text
//!     amp(out m | in n) = perm(U[m-rows, n-cols]) / √(∏ nᵢ! ∏ mⱼ!)
//! ```
//!
//! where the submatrix repeats row `j` `mⱼ` times and column `i` `nᵢ` times.
//! Distinguishable ("tagged") particles instead propagate independently with
//! single-particle probabilities `|U_ji|²`.

use std::collections::HashMap;
use std::fmt;

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::TOL_ALGEBRAIC;

/// Largest matrix size accepted by [`permanent`]; everything in this crate
/// is two-particle, so submatrices never exceed 2×2.
pub const MAX_PERMANENT_DIM: usize = 8;

/// Largest total particle number for the enumeration routines.
pub const MAX_PARTICLES: usize = 4;

/// Occupation-number state over a fixed set of modes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockState(pub Vec<usize>);

impl FockState {
    pub fn new(occupations: impl Into<Vec<usize>>) -> Self {
        Self(occupations.into())
    }

    /// Two particles in the first two of `modes` modes: the standard
    /// one-photon-per-input-port configuration.
    pub fn pair_in_first_two(modes: usize) -> Self {
        let mut occ = vec![0; modes];
        occ[0] = 1;
        occ[1] = 1;
        Self(occ)
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Mode indices with multiplicity, e.g. `(2, 1, 0)` → `[0, 0, 1]`.
    fn expand(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.total());
        for (mode, &n) in self.0.iter().enumerate() {
            out.extend(std::iter::repeat_n(mode, n));
        }
        out
    }

    fn occupancy_factorial(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n)).product()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dense complex transfer matrix over labeled modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTransform {
    matrix: Array2<Complex64>,
    labels: Option<Vec<String>>,
}

impl ModeTransform {
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NonSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("mode transform entries"));
        }
        Ok(Self { matrix, labels: None })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            matrix: Array2::eye(modes),
            labels: None,
        }
    }

    pub fn with_labels<S: Into<String>, I: IntoIterator<Item = S>>(mut self, labels: I) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(labels.len(), self.dim());
        self.labels = Some(labels);
        self
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Largest entry of `U†U − I` in absolute value.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut max = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.matrix[[k, i]].conj() * self.matrix[[k, j]];
                }
                if i == j {
                    acc -= 1.0;
                }
                max = max.max(acc.norm());
            }
        }
        max
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    fn ensure_unitary(&self) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev > TOL_ALGEBRAIC {
            return Err(Error::NonUnitary(dev));
        }
        Ok(())
    }

    /// Relabels modes: entry `(i, j)` moves to `(perm[i], perm[j])`.
    pub fn permute_modes(&self, perm: &[usize]) -> Self {
        let n = self.dim();
        assert_eq!(perm.len(), n);
        let mut out = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                out[[perm[i], perm[j]]] = self.matrix[[i, j]];
            }
        }
        Self {
            matrix: out,
            labels: None,
        }
    }
}

/// Two tagged (distinguishable) particles, one mode index each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledParticleState {
    pub modes: Vec<usize>,
    pub distinguishability: Distinguishability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distinguishability {
    Identical,
    Tagged,
}

impl LabeledParticleState {
    pub fn tagged(modes: impl Into<Vec<usize>>) -> Self {
        Self {
            modes: modes.into(),
            distinguishability: Distinguishability::Tagged,
        }
    }

    pub fn identical(modes: impl Into<Vec<usize>>) -> Self {
        Self {
            modes: modes.into(),
            distinguishability: Distinguishability::Identical,
        }
    }

    pub fn to_fock(&self, modes: usize) -> FockState {
        let mut occ = vec![0; modes];
        for &m in &self.modes {
            occ[m] += 1;
        }
        FockState(occ)
    }
}

/// Exact matrix permanent by Ryser's formula with Gray-code subset updates.
pub fn permanent(matrix: ArrayView2<'_, Complex64>) -> Result<Complex64> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::NonSquare {
            rows: n,
            cols: matrix.ncols(),
        });
    }
    if n > MAX_PERMANENT_DIM {
        return Err(Error::PermanentTooLarge(n));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut prev_gray: u64 = 0;
    for k in 1u64..(1 << n) {
        let gray = k ^ (k >> 1);
        let changed = (gray ^ prev_gray).trailing_zeros() as usize;
        let sign = if gray & (1 << changed) != 0 { 1.0 } else { -1.0 };
        for (i, sum) in row_sums.iter_mut().enumerate() {
            *sum += matrix[[i, changed]] * sign;
        }
        prev_gray = gray;
        let product: Complex64 = row_sums.iter().product();
        let parity = if gray.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        total += product * parity;
    }
    let overall = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(total * overall)
}

/// All occupation patterns of `total` particles over `modes` modes.
fn enumerate_patterns(modes: usize, total: usize) -> Vec<FockState> {
    fn recurse(occ: &mut Vec<usize>, mode: usize, remaining: usize, out: &mut Vec<FockState>) {
        if mode == occ.len() - 1 {
            occ[mode] = remaining;
            out.push(FockState(occ.clone()));
            occ[mode] = 0;
            return;
        }
        for n in (0..=remaining).rev() {
            occ[mode] = n;
            recurse(occ, mode + 1, remaining - n, out);
        }
        occ[mode] = 0;
    }
    let mut out = Vec::new();
    let mut occ = vec![0; modes];
    recurse(&mut occ, 0, total, &mut out);
    out
}

fn check_input(total: usize, state_modes: usize, u: &ModeTransform) -> Result<()> {
    u.ensure_unitary()?;
    if total == 0 || total > MAX_PARTICLES {
        return Err(Error::ParticleNumber(total));
    }
    if state_modes != u.dim() {
        return Err(Error::ModeMismatch {
            state: state_modes,
            transform: u.dim(),
        });
    }
    Ok(())
}

/// Output distribution for identical bosons: permanent amplitudes over all
/// occupation patterns. Probabilities sum to 1 for unitary transforms.
pub fn output_distribution_indistinguishable(
    input: &FockState,
    u: &ModeTransform,
) -> Result<HashMap<FockState, f64>> {
    check_input(input.total(), input.modes(), u)?;
    let cols = input.expand();
    let n = cols.len();
    let in_factorial = input.occupancy_factorial();
    let mut dist = HashMap::new();
    for pattern in enumerate_patterns(input.modes(), n) {
        let rows = pattern.expand();
        let mut sub = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        for (i, &row) in rows.iter().enumerate() {
            for (j, &col) in cols.iter().enumerate() {
                sub[[i, j]] = u.matrix[[row, col]];
            }
        }
        let amp = permanent(sub.view())? / (in_factorial * pattern.occupancy_factorial()).sqrt();
        dist.insert(pattern, amp.norm_sqr());
    }
    Ok(dist)
}

/// Output distribution for tagged particles: independent single-particle
/// propagation with probabilities `|U_ji|²`, convolved into occupations.
pub fn output_distribution_distinguishable(
    input: &LabeledParticleState,
    u: &ModeTransform,
) -> Result<HashMap<FockState, f64>> {
    check_input(input.modes.len(), u.dim(), u)?;
    let modes = u.dim();
    if let Some(&m) = input.modes.iter().find(|&&m| m >= modes) {
        return Err(Error::ModeMismatch {
            state: m + 1,
            transform: modes,
        });
    }
    let mut dist: HashMap<FockState, f64> = HashMap::new();
    dist.insert(FockState(vec![0; modes]), 1.0);
    for &source in &input.modes {
        let mut next: HashMap<FockState, f64> = HashMap::new();
        for (state, p) in &dist {
            for target in 0..modes {
                let w = u.matrix[[target, source]].norm_sqr();
                let mut occ = state.0.clone();
                occ[target] += 1;
                *next.entry(FockState(occ)).or_insert(0.0) += p * w;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// Propagates via the rule matching the state's distinguishability tag.
pub fn propagate(input: &LabeledParticleState, u: &ModeTransform) -> Result<HashMap<FockState, f64>> {
    match input.distinguishability {
        Distinguishability::Identical => {
            output_distribution_indistinguishable(&input.to_fock(u.dim()), u)
        }
        Distinguishability::Tagged => output_distribution_distinguishable(input, u),
    }
}

/// Traces out every mode except the two detected ones and classifies a pair
/// distribution into the four detectable outcomes.
pub fn marginalize_loss(
    dist: &HashMap<FockState, f64>,
    detected_a: usize,
    detected_b: usize,
) -> crate::beamsplitter::OutcomeDistribution {
    let mut out = crate::beamsplitter::OutcomeDistribution {
        p_coincidence: 0.0,
        p_both_a: 0.0,
        p_both_b: 0.0,
        p_at_least_one_lost: 0.0,
    };
    for (state, &p) in dist {
        let na = state.0[detected_a];
        let nb = state.0[detected_b];
        if na >= 1 && nb >= 1 {
            out.p_coincidence += p;
        } else if na >= 2 {
            out.p_both_a += p;
        } else if nb >= 2 {
            out.p_both_b += p;
        } else {
            out.p_at_least_one_lost += p;
        }
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamsplitter::BeamsplitterSpec;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Reference permanent by explicit expansion over permutations.
    fn permanent_naive(m: ArrayView2<'_, Complex64>) -> Complex64 {
        fn go(m: ArrayView2<'_, Complex64>, row: usize, used: &mut Vec<bool>) -> Complex64 {
            if row == m.nrows() {
                return Complex64::new(1.0, 0.0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..m.ncols() {
                if !used[col] {
                    used[col] = true;
                    acc += m[[row, col]] * go(m, row + 1, used);
                    used[col] = false;
                }
            }
            acc
        }
        go(m, 0, &mut vec![false; m.ncols()])
    }

    #[test]
    fn permanent_identity() {
        let m = Array2::eye(2);
        assert_abs_diff_eq!(permanent(m.view()).unwrap().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn permanent_2x2_definition() {
        let m = ndarray::array![[c(1.0, 1.0), c(2.0, 0.0)], [c(0.0, 3.0), c(1.0, -1.0)]];
        let p = permanent(m.view()).unwrap();
        // ad + bc = (1+i)(1-i) + 2(3i) = 2 + 6i
        assert_abs_diff_eq!(p.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.im, 6.0, epsilon = 1e-15);
    }

    #[test]
    fn permanent_all_ones_counts_permutations() {
        let m = Array2::from_elem((3, 3), c(1.0, 0.0));
        assert_abs_diff_eq!(permanent(m.view()).unwrap().re, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn permanent_matches_naive_expansion() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in 1..=5 {
            let m = Array2::from_shape_fn((n, n), |_| c(next(), next()));
            let fast = permanent(m.view()).unwrap();
            let slow = permanent_naive(m.view());
            assert_abs_diff_eq!((fast - slow).norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn permanent_rejects_bad_shapes() {
        let m = Array2::from_elem((2, 3), c(1.0, 0.0));
        assert!(matches!(permanent(m.view()), Err(Error::NonSquare { .. })));
        let m = Array2::from_elem((9, 9), c(1.0, 0.0));
        assert!(matches!(permanent(m.view()), Err(Error::PermanentTooLarge(9))));
    }

    #[test]
    fn hom_dip_through_dilated_lossless_splitter() {
        let spec = BeamsplitterSpec::new(
            c(0.0, std::f64::consts::FRAC_1_SQRT_2),
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        );
        let u = spec.dilate().unwrap();
        let dist =
            output_distribution_indistinguishable(&FockState::pair_in_first_two(4), &u).unwrap();
        let coincidence = dist[&FockState::new(vec![1, 1, 0, 0])];
        assert!(coincidence < 1e-15);
        let total: f64 = dist.values().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn bunching_through_half_half_splitter() {
        let spec = BeamsplitterSpec::new(c(0.5, 0.0), c(0.5, 0.0));
        let u = spec.dilate().unwrap();
        let dist =
            output_distribution_indistinguishable(&FockState::pair_in_first_two(4), &u).unwrap();
        let out = marginalize_loss(&dist, 0, 1);
        assert_abs_diff_eq!(out.p_coincidence, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(out.p_both_a, 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(out.p_both_b, 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(out.p_at_least_one_lost, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn distinguishable_pair_through_half_half_splitter() {
        let spec = BeamsplitterSpec::new(c(0.5, 0.0), c(0.5, 0.0));
        let u = spec.dilate().unwrap();
        let dist =
            output_distribution_distinguishable(&LabeledParticleState::tagged([0, 1]), &u).unwrap();
        let out = marginalize_loss(&dist, 0, 1);
        assert_abs_diff_eq!(out.p_coincidence, 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(out.p_both_a, 0.0625, epsilon = 1e-12);
        assert_abs_diff_eq!(out.p_both_b, 0.0625, epsilon = 1e-12);
        assert_abs_diff_eq!(out.p_at_least_one_lost, 0.75, epsilon = 1e-12);
    }

    #[test]
    fn distinguishable_coincidence_matches_classical_formula() {
        let spec = BeamsplitterSpec::new(
            c(0.0, std::f64::consts::FRAC_1_SQRT_2),
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        );
        let u = spec.dilate().unwrap();
        let dist =
            output_distribution_distinguishable(&LabeledParticleState::tagged([0, 1]), &u).unwrap();
        let out = marginalize_loss(&dist, 0, 1);
        assert_abs_diff_eq!(out.p_coincidence, 0.5, epsilon = 1e-12);

        let sample_ii = BeamsplitterSpec::from_polar(0.5, 0.0, 0.48, 5f64.to_radians());
        let u = sample_ii.dilate().unwrap();
        let dist =
            output_distribution_distinguishable(&LabeledParticleState::tagged([0, 1]), &u).unwrap();
        let out = marginalize_loss(&dist, 0, 1);
        assert_abs_diff_eq!(out.p_coincidence, 0.1156, epsilon = 1e-3);
        assert_abs_diff_eq!(
            out.p_coincidence,
            sample_ii.classical_coincidence().unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn double_occupation_through_identity() {
        let dist = output_distribution_indistinguishable(
            &FockState::new(vec![2, 0, 0, 0]),
            &ModeTransform::identity(4),
        )
        .unwrap();
        assert_abs_diff_eq!(dist[&FockState::new(vec![2, 0, 0, 0])], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn single_particle_rules_coincide_exactly() {
        let spec = BeamsplitterSpec::new(c(0.3, 0.2), c(0.4, -0.1));
        let u = spec.dilate().unwrap();
        let boson =
            output_distribution_indistinguishable(&FockState::new(vec![1, 0, 0, 0]), &u).unwrap();
        let tagged =
            output_distribution_distinguishable(&LabeledParticleState::tagged([0]), &u).unwrap();
        for (state, p) in &boson {
            assert_eq!(p, &tagged[state]);
        }
    }

    #[test]
    fn rejects_non_unitary_transform() {
        let m = Array2::from_elem((4, 4), c(0.3, 0.0));
        let u = ModeTransform::new(m).unwrap();
        assert!(matches!(
            output_distribution_indistinguishable(&FockState::pair_in_first_two(4), &u),
            Err(Error::NonUnitary(_))
        ));
    }

    #[test]
    fn pattern_enumeration_counts() {
        // C(modes + total - 1, total) patterns.
        assert_eq!(enumerate_patterns(4, 2).len(), 10);
        assert_eq!(enumerate_patterns(4, 1).len(), 4);
        assert_eq!(enumerate_patterns(3, 3).len(), 10);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;
        use std::f64::consts::TAU;

        fn valid_spec() -> impl Strategy<Value = BeamsplitterSpec> {
            (0.0..1.0f64, 0.0..TAU, 0.0..1.0f64, 0.0..TAU).prop_map(|(m1, p1, m2, p2)| {
                let d1 = Complex64::from_polar(m1, p1);
                let d2 = Complex64::from_polar(m2, p2);
                BeamsplitterSpec::new((d1 - d2) / 2.0, (d1 + d2) / 2.0)
            })
        }

        proptest! {
            #[test]
            fn distributions_normalize(spec in valid_spec()) {
                let u = spec.dilate().unwrap();
                let boson = output_distribution_indistinguishable(
                    &FockState::pair_in_first_two(4), &u).unwrap();
                let sum: f64 = boson.values().sum();
                prop_assert!((sum - 1.0).abs() < crate::tol::TOL_ORACLE);
                let tagged = output_distribution_distinguishable(
                    &LabeledParticleState::tagged([0, 1]), &u).unwrap();
                let sum: f64 = tagged.values().sum();
                prop_assert!((sum - 1.0).abs() < crate::tol::TOL_ORACLE);
            }

            #[test]
            fn permutation_covariance(spec in valid_spec(), shift in 0usize..4) {
                let u = spec.dilate().unwrap();
                let perm: Vec<usize> = (0..4).map(|i| (i + shift) % 4).collect();
                let permuted = u.permute_modes(&perm);
                let input = FockState::new(vec![1, 1, 0, 0]);
                let mut permuted_occ = vec![0; 4];
                permuted_occ[perm[0]] = 1;
                permuted_occ[perm[1]] = 1;
                let base = output_distribution_indistinguishable(&input, &u).unwrap();
                let moved = output_distribution_indistinguishable(
                    &FockState::new(permuted_occ), &permuted).unwrap();
                for (state, p) in &base {
                    let mut occ = vec![0; 4];
                    for (mode, &n) in state.0.iter().enumerate() {
                        occ[perm[mode]] = n;
                    }
                    let q = moved[&FockState::new(occ)];
                    prop_assert!((p - q).abs() < crate::tol::TOL_ORACLE);
                }
            }
        }
    }
}
