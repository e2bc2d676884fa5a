use super::block::check_delta;
use super::certificate::{cube_expansion, cube_weight, Branch, Draft, GrowthCertificate, Mode, TermTarget};
use super::thinning::thin;
use super::{min_gap_block, PipelineOptions, Stage, WitnessError};
use crate::cube::greedy_cube;
use crate::distinct::{min_ratio_gap, separation_check, separation_threshold, WeightVector};
use crate::setcore::{FiniteSet, Scalar};

pub fn theorem1_certificate(a: &FiniteSet, k: usize, delta: &Scalar) -> Result<GrowthCertificate, WitnessError> {
    theorem1_certificate_with(a, k, delta, &PipelineOptions::default())
}

/// Cube pipeline: minimal block `B`, greedy cube of dimension `k - 1` with
/// ratios from `B/B`, thinning of the survivors to a well-separated `C`,
/// weights `δ_i = (θ_1 - 1) ⋯ (θ_i - 1)`, and expansion of every weighted sum
/// into `±θ^γ c` terms of `A`.
pub fn theorem1_certificate_with(
    a: &FiniteSet,
    k: usize,
    delta: &Scalar,
    opts: &PipelineOptions,
) -> Result<GrowthCertificate, WitnessError> {
    if k < 2 {
        return Err(WitnessError::at(Stage::Input, "k must be at least 2"));
    }
    if !a.is_positive() || a.is_empty() {
        return Err(WitnessError::at(Stage::Input, "set must be nonempty and positive"));
    }
    check_delta(delta)?;
    let block = min_gap_block(a, delta)?;
    let cube = greedy_cube(a, &block.elements, k - 1).map_err(|e| WitnessError::at(Stage::Cube, e))?;
    let thetas = cube.thetas;
    let weights = WeightVector::new((0..k).map(|i| cube_weight(&thetas, i)).collect())
        .map_err(|e| WitnessError::at(Stage::Weights, e))?;

    let two_k = Scalar::from(2 * k);
    let ratio_terms: Vec<Scalar> = thetas.iter().map(|t| &two_k * &(t - &Scalar::one())).collect();
    let mut threshold = separation_threshold(&weights);
    for t in &ratio_terms {
        if *t > threshold {
            threshold = t.clone();
        }
    }
    let stride = block.length_s.saturating_mul(k).saturating_mul(1usize << k.min(60));
    let (c, record) = thin(&cube.survivors, stride, &threshold, k, opts.thinning)?;
    let gap = min_ratio_gap(&c);
    let chain_ok = gap.as_ref().is_none_or(|g| ratio_terms.iter().all(|t| g > t));
    if !separation_check(&c, &weights, k) || !chain_ok {
        return Err(WitnessError::at(Stage::Separation, "C is not separated enough for the cube weights"));
    }

    let draft = Draft {
        mode: Mode::Theorem1,
        branch: Branch::Cube,
        k,
        delta_param: delta.clone(),
        block,
        expansion: (0..k).map(|i| cube_expansion(&thetas, i)).collect(),
        thetas,
        anchor: None,
        polynomials: Vec::new(),
        weights,
        weight_sources: (0..k).collect(),
        thinning: Some(record),
        target: TermTarget::Source,
    };
    draft.finish(a, &c, a, opts)
}
