use num_integer::Roots;
use rayon::prelude::*;

use super::block::check_delta;
use super::certificate::{
    constant_expansion, polynomial_expansion, Branch, Draft, GrowthCertificate, Mode, TermTarget,
};
use super::progression::{chain_lengths, ratios_above_one};
use super::thinning::thin;
use super::{min_gap_block, PipelineOptions, Stage, WitnessError};
use crate::distinct::{separation_check, separation_threshold, spread_subset, WeightVector};
use crate::pte::{polynomial_family, IntPolynomial};
use crate::setcore::{productset, FiniteSet, Scalar};

pub fn theorem2_certificate(a: &FiniteSet, k: usize, delta: &Scalar) -> Result<GrowthCertificate, WitnessError> {
    theorem2_certificate_with(a, k, delta, &PipelineOptions::default())
}

/// Polynomial pipeline.
///
/// With `f_1, ..., f_{k-1}` vanishing at 1 to orders `1, ..., k-1` and
/// `M = max deg f_j`, it picks `θ ∈ B/B` and `a_1 ∈ A` maximizing the number of
/// `a_2 ∈ A` whose product `y = a_1 a_2` starts a progression
/// `y, yθ, ..., yθ^M` inside `A.A`. Those `y` are thinned to `C`, the weights
/// `1, f_1(θ), ..., f_{k-1}(θ)` are sorted decreasing and assigned to blocks,
/// and every weighted sum expands into `±θ^e y` terms of `A.A`.
///
/// When the minimal block is not dyadic the spread branch runs instead:
/// unit weights on a spread subset of `A`, with terms in `A` itself.
pub fn theorem2_certificate_with(
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
    let family = polynomial_family(k as u32).map_err(|e| WitnessError::at(Stage::Family, e))?;
    let polys: Vec<IntPolynomial> = family.polynomials().cloned().collect();
    let m_deg = family.max_degree as usize;
    let block = min_gap_block(a, delta)?;

    if !block.dyadic {
        return spread_branch(a, k, delta, block, polys, opts);
    }

    let aa = productset(a, a);
    let (theta, anchor, ys) = best_progressions(a, &aa, &block.elements, m_deg)?;

    // weight 0 is the constant 1, weight j is f_j(θ)
    let mut values: Vec<(usize, Scalar)> = vec![(0, Scalar::one())];
    values.extend(polys.iter().enumerate().map(|(j, f)| (j + 1, f.eval(&theta))));
    values.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    if values[0].0 != 0 {
        return Err(WitnessError::at(
            Stage::Weights,
            format!("f_{}({theta}) = {} exceeds 1", values[0].0, values[0].1),
        ));
    }
    if values.windows(2).any(|w| w[0].1 == w[1].1) {
        return Err(WitnessError::at(Stage::Weights, format!("polynomial values at {theta} are not distinct")));
    }
    let weights = WeightVector::new(values.iter().map(|v| v.1.clone()).collect())
        .map_err(|e| WitnessError::at(Stage::Weights, e))?;
    if !weights.is_strictly_decreasing() {
        return Err(WitnessError::at(Stage::Weights, "weights are not strictly decreasing"));
    }
    let sources: Vec<usize> = values.iter().map(|v| v.0).collect();

    let threshold = separation_threshold(&weights);
    let stride = a.len().sqrt().max(1);
    let (c, record) = thin(&ys, stride, &threshold, k, opts.thinning)?;
    if !separation_check(&c, &weights, k) {
        return Err(WitnessError::at(Stage::Separation, "C is not separated enough for the polynomial weights"));
    }
    let expansion = sources
        .iter()
        .map(|&j| if j == 0 { constant_expansion() } else { polynomial_expansion(&polys[j - 1], &theta) })
        .collect();

    let draft = Draft {
        mode: Mode::Theorem2,
        branch: Branch::Pte,
        k,
        delta_param: delta.clone(),
        block,
        thetas: vec![theta],
        anchor: Some(anchor),
        polynomials: polys,
        weights,
        weight_sources: sources,
        expansion,
        thinning: Some(record),
        target: TermTarget::ProductSet,
    };
    draft.finish(a, &c, &aa, opts)
}

/// `(θ, a_1, {a_1 a_2 : a_2 special})` with the most special `a_2`; ties go to
/// the smaller `θ`, then the smaller `a_1`.
fn best_progressions(
    a: &FiniteSet,
    aa: &FiniteSet,
    b: &FiniteSet,
    m_deg: usize,
) -> Result<(Scalar, Scalar, FiniteSet), WitnessError> {
    let ratios = ratios_above_one(b)?;
    let n = a.len();
    let xs = a.elements();
    // index of a_i a_j in A.A
    let table: Vec<usize> = (0..n * n)
        .into_par_iter()
        .map(|p| aa.index_of(&(&xs[p / n] * &xs[p % n])).expect("product lies in A.A"))
        .collect();
    let best: Option<(usize, usize, usize)> = ratios
        .par_iter()
        .enumerate()
        .map(|(ti, theta)| {
            let lens = chain_lengths(aa, theta);
            let mut top: Option<(usize, usize, usize)> = None;
            for i in 0..n {
                let count = (0..n).filter(|&j| lens[table[i * n + j]] > m_deg).count();
                if count > 0 && top.is_none_or(|t| count > t.0) {
                    top = Some((count, ti, i));
                }
            }
            top
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .reduce(|x, y| if y.0 > x.0 { y } else { x });
    let Some((_, ti, i)) = best else {
        return Err(WitnessError::at(
            Stage::Progression,
            format!("translate-lemma search failed: no progression of length {m_deg} in A.A"),
        ));
    };
    let theta = ratios[ti].clone();
    let lens = chain_lengths(aa, &theta);
    let ys = FiniteSet::new(
        (0..n).filter(|&j| lens[table[i * n + j]] > m_deg).map(|j| aa.elements()[table[i * n + j]].clone()),
    );
    Ok((theta, xs[i].clone(), ys))
}

fn spread_branch(
    a: &FiniteSet,
    k: usize,
    delta: &Scalar,
    block: super::MinGapBlock,
    polys: Vec<IntPolynomial>,
    opts: &PipelineOptions,
) -> Result<GrowthCertificate, WitnessError> {
    let m = a.len().sqrt();
    let c = spread_subset(a, m).map_err(|e| WitnessError::at(Stage::Spread, e))?;
    let draft = Draft {
        mode: Mode::Theorem2,
        branch: Branch::Spread,
        k,
        delta_param: delta.clone(),
        block,
        thetas: Vec::new(),
        anchor: None,
        polynomials: polys,
        weights: WeightVector::uniform(k),
        weight_sources: vec![0; k],
        expansion: vec![constant_expansion(); k],
        thinning: None,
        target: TermTarget::Source,
    };
    draft.finish(a, &c, a, opts)
}
