use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use super::scalar::Scalar;
use super::SetError;

/// A finite set of exact rationals, stored strictly increasing.
///
/// The optional name is a label only; it takes no part in equality.
#[derive(Clone, Serialize)]
pub struct FiniteSet {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    elements: Vec<Scalar>,
}

impl FiniteSet {
    pub fn new<I: IntoIterator<Item = Scalar>>(items: I) -> Self {
        let mut elements: Vec<Scalar> = items.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        FiniteSet { name: None, elements }
    }

    pub fn empty() -> Self {
        FiniteSet { name: None, elements: Vec::new() }
    }

    pub fn from_integers<I, T>(items: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<Scalar>,
    {
        FiniteSet::new(items.into_iter().map(Into::into))
    }

    /// Caller guarantees `elements` is strictly increasing.
    pub(crate) fn from_sorted_unchecked(elements: Vec<Scalar>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        FiniteSet { name: None, elements }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Scalar] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Scalar> {
        self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.elements.iter()
    }

    /// 0-based; `get(0)` is the minimum.
    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.elements.get(index)
    }

    pub fn min(&self) -> Option<&Scalar> {
        self.elements.first()
    }

    pub fn max(&self) -> Option<&Scalar> {
        self.elements.last()
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn index_of(&self, x: &Scalar) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    pub fn is_positive(&self) -> bool {
        self.elements.first().is_none_or(Scalar::is_positive)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Scalar::zero())
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    /// First `n` elements (all of them if `n >= len`).
    pub fn prefix(&self, n: usize) -> FiniteSet {
        FiniteSet::from_sorted_unchecked(self.elements[..n.min(self.len())].to_vec())
    }

    /// Parse the line-oriented set format: one integer or `p/q` per line,
    /// `#` starts a comment line, blank lines are ignored.
    pub fn parse(text: &str) -> Result<FiniteSet, SetError> {
        let mut items = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: Scalar = line.parse().map_err(|e| SetError::Parse { line: i + 1, message: format!("{e}") })?;
            items.push(v);
        }
        Ok(FiniteSet::new(items))
    }

    /// The set-file rendering; `parse(to_set_file())` is the identity.
    pub fn to_set_file(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str("# ");
            out.push_str(name);
            out.push('\n');
        }
        for e in &self.elements {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FiniteSet, SetError> {
        let text = std::fs::read_to_string(path.as_ref())?;
        FiniteSet::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SetError> {
        std::fs::write(path.as_ref(), self.to_set_file())?;
        Ok(())
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for FiniteSet {}

impl Hash for FiniteSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements.iter()).finish()
    }
}

impl FromIterator<Scalar> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        FiniteSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Scalar;
    type IntoIter = std::slice::Iter<'a, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

#[derive(Deserialize)]
struct RawSet {
    #[serde(default)]
    name: Option<String>,
    elements: Vec<Scalar>,
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawSet::deserialize(deserializer)?;
        let mut set = FiniteSet::new(raw.elements);
        set.name = raw.name;
        Ok(set)
    }
}
