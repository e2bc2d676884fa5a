use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{MinGapBlock, PipelineOptions, Stage, ThinningRecord, WitnessError};
use crate::distinct::{block_partition, enumerate_sums_with, BlockPartition, WeightVector};
use crate::pte::IntPolynomial;
use crate::setcore::{productset, signed_combination_capped, FiniteSet, Scalar, SetError};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Terms in `A`, weights from cube ratios.
    Theorem1,
    /// Terms in `A.A`, weights from polynomial values (or the spread branch).
    Theorem2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Weights `(θ_1 - 1) ⋯ (θ_i - 1)`.
    Cube,
    /// Weights `f_j(θ)`.
    Pte,
    /// Unit weights on a spread subset; the minimal block was not dyadic.
    Spread,
}

/// Where every expansion term must lie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermTarget {
    #[serde(rename = "A")]
    Source,
    #[serde(rename = "A.A")]
    ProductSet,
}

/// Identifies the source set without embedding it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRef {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub size: usize,
    /// SHA-256 of the set-file rendering, see [`set_digest`].
    pub digest: String,
}

impl SourceRef {
    pub fn of(a: &FiniteSet) -> Self {
        SourceRef { name: a.name().map(str::to_string), size: a.len(), digest: set_digest(a) }
    }
}

/// Hex SHA-256 of the elements, one per line, each followed by `\n`.
pub fn set_digest(a: &FiniteSet) -> String {
    let mut h = Sha256::new();
    for x in a {
        h.update(x.to_string().as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// `sign · multiplier · c` for each element `c` of a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedTerm {
    pub sign: i8,
    pub multiplier: Scalar,
    pub monomial: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionBound {
    #[serde(rename = "K")]
    pub k_plus: usize,
    #[serde(rename = "L")]
    pub l_minus: usize,
}

/// `N` pairwise distinct values inside `KA - LA` (or `K(A.A) - L(A.A)`).
///
/// The values are the weighted sums `Σ c_i δ_{i-1}` over `c_i ∈ C_i`. Block
/// `i`'s weight expands as `Σ sign · multiplier` over `expansion[i]`, so each
/// sum is a signed combination of the products `multiplier · c_i`, which
/// must all lie in the target set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub version: u32,
    pub mode: Mode,
    pub branch: Branch,
    pub source: SourceRef,
    pub k: usize,
    pub delta_param: Scalar,
    pub block: MinGapBlock,
    /// Cube ratios, or the single `θ` of the polynomial branch.
    pub thetas: Vec<Scalar>,
    /// The fixed factor `a_1` of the polynomial branch.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub anchor: Option<Scalar>,
    /// `f_1, ..., f_{k-1}` in the polynomial branch and the spread branch.
    #[serde(default)]
    pub polynomials: Vec<IntPolynomial>,
    pub weights: WeightVector,
    /// Per block: the index `i` of the cube product, or `j` of `f_j` (0 is the
    /// constant weight 1).
    pub weight_sources: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub thinning: Option<ThinningRecord>,
    pub target: TermTarget,
    pub partition: BlockPartition,
    pub expansion: Vec<Vec<SignedTerm>>,
    /// All `N` sums, ascending.
    pub sums: Vec<Scalar>,
    pub distinct_count: usize,
    pub expansion_bound: ExpansionBound,
    /// `|KA - LA|` when it fit under the cross-check cap.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub signed_combination_size: Option<usize>,
    pub verified: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CertificateJsonError {
    #[error("malformed certificate JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("certificate has no content_hash")]
    MissingHash,
    #[error("content hash mismatch: recorded {recorded}, computed {computed}")]
    HashMismatch { recorded: String, computed: String },
}

/// Keys sorted at every level, no whitespace.
fn canonical(v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                canonical(&m[k], out);
            }
            out.push('}');
        }
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                canonical(x, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn hash_value(v: &Value) -> String {
    let mut s = String::new();
    canonical(v, &mut s);
    hex::encode(Sha256::digest(s.as_bytes()))
}

impl GrowthCertificate {
    /// SHA-256 over the canonical JSON form (sorted keys, compact).
    pub fn content_hash(&self) -> String {
        hash_value(&serde_json::to_value(self).expect("certificate serializes"))
    }

    /// Pretty JSON with a `content_hash` field added.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("certificate serializes");
        let hash = hash_value(&v);
        v.as_object_mut().expect("object").insert("content_hash".into(), Value::String(hash));
        let mut s = String::new();
        canonical_pretty(&v, 0, &mut s);
        s.push('\n');
        s
    }

    /// Parses the JSON form, rejecting it unless the content hash matches.
    pub fn from_json(text: &str) -> Result<Self, CertificateJsonError> {
        let mut v: Value = serde_json::from_str(text)?;
        let recorded = match v.as_object_mut().and_then(|m| m.remove("content_hash")) {
            Some(Value::String(h)) => h,
            _ => return Err(CertificateJsonError::MissingHash),
        };
        let computed = hash_value(&v);
        if computed != recorded {
            return Err(CertificateJsonError::HashMismatch { recorded, computed });
        }
        Ok(serde_json::from_value(v)?)
    }

    pub fn n(&self) -> usize {
        self.distinct_count
    }
}

/// Pretty printing with sorted keys, so output does not depend on map order.
fn canonical_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize, out: &mut String| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Object(m) if !m.is_empty() => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(indent + 2, out);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                canonical_pretty(&m[*k], indent + 2, out);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(indent, out);
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() => {
            // arrays of scalars stay on one line
            if a.iter().all(|x| !x.is_object() && !x.is_array()) {
                canonical(v, out);
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(indent + 2, out);
                canonical_pretty(x, indent + 2, out);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(indent, out);
            out.push(']');
        }
        other => canonical(other, out),
    }
}

/// `Π_{j < i} (θ_j - 1)`.
pub(crate) fn cube_weight(thetas: &[Scalar], i: usize) -> Scalar {
    thetas[..i].iter().map(|t| t - &Scalar::one()).product()
}

/// `Π_{j < i} (θ_j - 1)` expanded: `(-1)^{i - |γ|} θ^γ` over `γ ⊆ {0..i-1}`.
pub(crate) fn cube_expansion(thetas: &[Scalar], i: usize) -> Vec<SignedTerm> {
    let mut out = Vec::with_capacity(1 << i);
    for mask in 0u64..(1u64 << i) {
        let mut mult = Scalar::one();
        let mut label = Vec::new();
        for (j, th) in thetas[..i].iter().enumerate() {
            if mask >> j & 1 == 1 {
                mult = mult * th;
                label.push(format!("t{}", j + 1));
            }
        }
        let sign = if (i - mask.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
        let monomial = if label.is_empty() { "1".to_string() } else { label.join("*") };
        out.push(SignedTerm { sign, multiplier: mult, monomial });
    }
    out
}

/// `f(θ)` expanded monomial by monomial; a coefficient `c` gives `|c|` copies.
pub(crate) fn polynomial_expansion(f: &IntPolynomial, theta: &Scalar) -> Vec<SignedTerm> {
    use num_traits::{Signed, ToPrimitive};
    let mut out = Vec::new();
    for (e, c) in f.terms() {
        let sign = if c.is_negative() { -1 } else { 1 };
        let copies = c.abs().to_usize().expect("small coefficient");
        for _ in 0..copies {
            out.push(SignedTerm { sign, multiplier: theta.pow(e as i32), monomial: format!("theta^{e}") });
        }
    }
    out
}

pub(crate) fn constant_expansion() -> Vec<SignedTerm> {
    vec![SignedTerm { sign: 1, multiplier: Scalar::one(), monomial: "1".into() }]
}

fn count_signs(expansion: &[Vec<SignedTerm>]) -> ExpansionBound {
    let terms = expansion.iter().flatten();
    let k_plus = terms.clone().filter(|t| t.sign > 0).count();
    ExpansionBound { k_plus, l_minus: terms.count() - k_plus }
}

/// The bound each mode promises for `(K, L)`.
pub(crate) fn mode_bound(mode: Mode, k: usize, polys: &[IntPolynomial], b: ExpansionBound) -> Result<(), String> {
    match mode {
        Mode::Theorem1 => {
            let h = 1usize.checked_shl(k as u32 - 1).unwrap_or(usize::MAX);
            if b.k_plus > h || b.l_minus >= h {
                return Err(format!("(K, L) = ({}, {}) outside K <= {h}, L < {h}", b.k_plus, b.l_minus));
            }
        }
        Mode::Theorem2 => {
            let limit = 2 * polys.iter().map(IntPolynomial::term_count).sum::<usize>();
            if b.k_plus + b.l_minus > limit {
                return Err(format!("K + L = {} exceeds {limit}", b.k_plus + b.l_minus));
            }
        }
    }
    Ok(())
}

fn membership(p: &BlockPartition, expansion: &[Vec<SignedTerm>], target: &FiniteSet) -> Result<(), String> {
    for (i, (block, terms)) in p.blocks.iter().zip(expansion).enumerate() {
        for c in block {
            for t in terms {
                let v = &t.multiplier * c;
                if !target.contains(&v) {
                    return Err(format!("term {} * {c} = {v} of block {} not in target", t.monomial, i + 1));
                }
            }
        }
    }
    Ok(())
}

fn template_matches(weights: &WeightVector, expansion: &[Vec<SignedTerm>]) -> Result<(), String> {
    for (i, (w, terms)) in weights.deltas().iter().zip(expansion).enumerate() {
        if terms.iter().any(|t| t.sign != 1 && t.sign != -1) {
            return Err(format!("block {} has a sign other than +-1", i + 1));
        }
        let total: Scalar = terms
            .iter()
            .map(|t| if t.sign > 0 { t.multiplier.clone() } else { -&t.multiplier })
            .sum();
        if total != *w {
            return Err(format!("block {} terms sum to {total}, weight is {w}", i + 1));
        }
    }
    Ok(())
}

/// Everything a pipeline has decided before partitioning `C`.
pub(crate) struct Draft {
    pub mode: Mode,
    pub branch: Branch,
    pub k: usize,
    pub delta_param: Scalar,
    pub block: MinGapBlock,
    pub thetas: Vec<Scalar>,
    pub anchor: Option<Scalar>,
    pub polynomials: Vec<IntPolynomial>,
    pub weights: WeightVector,
    pub weight_sources: Vec<usize>,
    pub expansion: Vec<Vec<SignedTerm>>,
    pub thinning: Option<ThinningRecord>,
    pub target: TermTarget,
}

impl Draft {
    /// Partition `c`, enumerate and check the sums, verify every term and the
    /// `(K, L)` bound, and cross-check against `|KA - LA|` when affordable.
    pub fn finish(
        self,
        a: &FiniteSet,
        c: &FiniteSet,
        target_set: &FiniteSet,
        opts: &PipelineOptions,
    ) -> Result<GrowthCertificate, WitnessError> {
        let partition = block_partition(c, self.k).map_err(|e| WitnessError::at(Stage::Partition, e))?;
        template_matches(&self.weights, &self.expansion).map_err(|e| WitnessError::at(Stage::Expansion, e))?;
        let bound = count_signs(&self.expansion);
        mode_bound(self.mode, self.k, &self.polynomials, bound).map_err(|e| WitnessError::at(Stage::Expansion, e))?;
        membership(&partition, &self.expansion, target_set).map_err(|e| WitnessError::at(Stage::Membership, e))?;
        let (sums, distinct) = enumerate_sums_with(&partition, &self.weights, opts.enumeration_budget)
            .map_err(|e| WitnessError::at(Stage::Enumeration, e))?;
        if !distinct {
            return Err(WitnessError::at(
                Stage::Enumeration,
                format!("only {} distinct values among {} sums", sums.len(), partition.tuple_count()),
            ));
        }
        let n = sums.len();
        let signed_combination_size =
            match signed_combination_capped(bound.k_plus, bound.l_minus, target_set, opts.cross_check_cap) {
                Ok(s) => Some(s.len()),
                Err(SetError::Blowup { .. }) => None,
                Err(e) => return Err(WitnessError::at(Stage::CrossCheck, e)),
            };
        if let Some(m) = signed_combination_size {
            if n > m {
                return Err(WitnessError::at(Stage::CrossCheck, format!("N = {n} exceeds |KA - LA| = {m}")));
            }
        }
        Ok(GrowthCertificate {
            version: CERTIFICATE_VERSION,
            mode: self.mode,
            branch: self.branch,
            source: SourceRef::of(a),
            k: self.k,
            delta_param: self.delta_param,
            block: self.block,
            thetas: self.thetas,
            anchor: self.anchor,
            polynomials: self.polynomials,
            weights: self.weights,
            weight_sources: self.weight_sources,
            thinning: self.thinning,
            target: self.target,
            partition,
            expansion: self.expansion,
            sums: sums.into_elements(),
            distinct_count: n,
            expansion_bound: bound,
            signed_combination_size,
            verified: true,
        })
    }
}

fn weight_provenance(cert: &GrowthCertificate) -> Result<(), String> {
    let d = cert.weights.deltas();
    if cert.weight_sources.len() != d.len() {
        return Err("one weight source per block required".into());
    }
    for (i, (w, &src)) in d.iter().zip(&cert.weight_sources).enumerate() {
        let expected = match cert.branch {
            Branch::Cube => {
                if src != i || src > cert.thetas.len() {
                    return Err(format!("block {} cites cube product {src}", i + 1));
                }
                cube_weight(&cert.thetas, src)
            }
            Branch::Pte => {
                let theta = cert.thetas.first().ok_or("polynomial branch without theta")?;
                match src {
                    0 => Scalar::one(),
                    j => cert.polynomials.get(j - 1).ok_or(format!("no polynomial f_{j}"))?.eval(theta),
                }
            }
            Branch::Spread => Scalar::one(),
        };
        if *w != expected {
            return Err(format!("weight {} is {w}, its source gives {expected}", i + 1));
        }
    }
    if cert.branch == Branch::Pte {
        let mut seen = cert.weight_sources.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != cert.weight_sources.len() {
            return Err("a polynomial weight is used twice".into());
        }
    }
    Ok(())
}

/// Re-verifies a certificate against `A` from scratch, reporting the first
/// failed check.
pub fn recheck_detailed(cert: &GrowthCertificate, a: &FiniteSet) -> Result<(), String> {
    if cert.version != CERTIFICATE_VERSION {
        return Err(format!("unknown version {}", cert.version));
    }
    if !cert.verified {
        return Err("certificate is not marked verified".into());
    }
    if !a.is_positive() {
        return Err("source set must be positive".into());
    }
    if cert.source.size != a.len() || cert.source.digest != set_digest(a) {
        return Err("certificate belongs to a different source set".into());
    }
    let k = cert.k;
    if k == 0 || cert.partition.len() != k || cert.weights.len() != k || cert.expansion.len() != k {
        return Err("block count, weight count and expansion count must all equal k".into());
    }
    if !cert.partition.is_valid() || cert.partition.blocks.iter().any(|b| !b.is_positive()) {
        return Err("blocks are not positive and strictly ordered".into());
    }
    weight_provenance(cert)?;
    template_matches(&cert.weights, &cert.expansion)?;
    let bound = count_signs(&cert.expansion);
    if bound != cert.expansion_bound {
        return Err(format!(
            "recorded (K, L) = ({}, {}), terms give ({}, {})",
            cert.expansion_bound.k_plus, cert.expansion_bound.l_minus, bound.k_plus, bound.l_minus
        ));
    }
    mode_bound(cert.mode, k, &cert.polynomials, bound)?;
    let target = match cert.target {
        TermTarget::Source => a.clone(),
        TermTarget::ProductSet => productset(a, a),
    };
    membership(&cert.partition, &cert.expansion, &target)?;
    let expected = cert.partition.tuple_count();
    let budget = u64::try_from(expected).unwrap_or(u64::MAX);
    let (sums, _) = enumerate_sums_with(&cert.partition, &cert.weights, budget).map_err(|e| e.to_string())?;
    if sums.elements() != cert.sums.as_slice() {
        return Err("recorded sums differ from the recomputed ones".into());
    }
    if sums.len() as u128 != expected || cert.distinct_count != sums.len() {
        return Err(format!(
            "{} distinct sums, {expected} tuples, {} recorded",
            sums.len(),
            cert.distinct_count
        ));
    }
    if let Some(m) = cert.signed_combination_size {
        if cert.distinct_count > m {
            return Err(format!("N = {} exceeds recorded |KA - LA| = {m}", cert.distinct_count));
        }
    }
    Ok(())
}

pub fn recheck_certificate(cert: &GrowthCertificate, a: &FiniteSet) -> bool {
    recheck_detailed(cert, a).is_ok()
}

/// Parses (checking the content hash) and rechecks.
pub fn recheck_json(json: &str, a: &FiniteSet) -> bool {
    GrowthCertificate::from_json(json).is_ok_and(|c| recheck_certificate(&c, a))
}
