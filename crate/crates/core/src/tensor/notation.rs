use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::TensorError;

/// Einsum notation: one index tuple per input tensor plus an output tuple.
///
/// Labels are arbitrary `usize` values. [`validate_notation`] relabels them
/// to `0..m` in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EinsumNotation {
    inputs: Vec<Vec<usize>>,
    output: Vec<usize>,
}

impl EinsumNotation {
    pub fn new(inputs: Vec<Vec<usize>>, output: Vec<usize>) -> Self {
        Self { inputs, output }
    }

    /// Full contraction to a scalar.
    pub fn scalar(inputs: Vec<Vec<usize>>) -> Self {
        Self { inputs, output: Vec::new() }
    }

    pub fn inputs(&self) -> &[Vec<usize>] {
        &self.inputs
    }

    pub fn output(&self) -> &[usize] {
        &self.output
    }

    /// Number of distinct labels across the inputs.
    pub fn index_count(&self) -> usize {
        self.inputs.iter().flatten().collect::<BTreeSet<_>>().len()
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 0;
        for &l in self.inputs.iter().flatten() {
            if l > next {
                return false;
            }
            if l == next {
                next += 1;
            }
        }
        true
    }
}

impl fmt::Display for EinsumNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = |t: &[usize]| t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        let ins: Vec<String> = self.inputs.iter().map(|t| tuple(t)).collect();
        write!(f, "{} -> {}", ins.join(", "), tuple(&self.output))
    }
}

/// Check structural validity and relabel indices to `0..m` by first
/// appearance.
pub fn validate_notation(notation: &EinsumNotation) -> Result<EinsumNotation, TensorError> {
    if notation.inputs.is_empty() {
        return Err(TensorError::EmptyNotation);
    }
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut inputs = Vec::with_capacity(notation.inputs.len());
    for (k, t) in notation.inputs.iter().enumerate() {
        if t.is_empty() {
            return Err(TensorError::EmptyTuple(k));
        }
        let relabeled = t
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        inputs.push(relabeled);
    }
    let mut seen = BTreeSet::new();
    let mut output = Vec::with_capacity(notation.output.len());
    for l in &notation.output {
        let Some(&c) = map.get(l) else {
            return Err(TensorError::InvalidOutput(format!("index {l} is absent from the inputs")));
        };
        if !seen.insert(c) {
            return Err(TensorError::InvalidOutput(format!("index {l} repeats")));
        }
        output.push(c);
    }
    Ok(EinsumNotation { inputs, output })
}

/// Signature of a multiplicatively decomposable kernel of order `m`: index
/// tuples whose union is exactly `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    tuples: Vec<Vec<usize>>,
    arity: usize,
}

impl Signature {
    pub fn new(tuples: Vec<Vec<usize>>) -> Result<Self, TensorError> {
        if tuples.is_empty() {
            return Err(TensorError::EmptyNotation);
        }
        if let Some(k) = tuples.iter().position(|t| t.is_empty()) {
            return Err(TensorError::EmptyTuple(k));
        }
        let used: BTreeSet<usize> = tuples.iter().flatten().copied().collect();
        let arity = used.len();
        if let Some(&bad) = used.iter().find(|&&i| i >= arity) {
            let missing = (0..arity).find(|i| !used.contains(i)).unwrap_or(0);
            return Err(TensorError::InvalidSignature(format!(
                "index {bad} used but index {missing} is missing; indices must cover 0..m"
            )));
        }
        Ok(Self { tuples, arity })
    }

    /// Build from 1-based tuples.
    pub fn from_one_based(tuples: &[Vec<usize>]) -> Result<Self, TensorError> {
        let mut zero = Vec::with_capacity(tuples.len());
        for t in tuples {
            let mut z = Vec::with_capacity(t.len());
            for &i in t {
                if i == 0 {
                    return Err(TensorError::InvalidSignature("indices are 1-based".into()));
                }
                z.push(i - 1);
            }
            zero.push(z);
        }
        Self::new(zero)
    }

    /// Parse `"1 2, 2 3, 3 4"`: comma-separated tuples of 1-based indices.
    pub fn parse_one_based(text: &str) -> Result<Self, TensorError> {
        let mut tuples = Vec::new();
        for part in text.split(',') {
            let mut t = Vec::new();
            for tok in part.split_whitespace() {
                let i: usize =
                    tok.parse().map_err(|_| TensorError::InvalidSignature(format!("bad index {tok:?}")))?;
                t.push(i);
            }
            tuples.push(t);
        }
        Self::from_one_based(&tuples)
    }

    /// Chain `(0,1), (1,2), ..., (m-2,m-1)`.
    pub fn chain(m: usize) -> Result<Self, TensorError> {
        if m < 2 {
            return Err(TensorError::InvalidSignature("a chain needs at least two indices".into()));
        }
        Self::new((0..m - 1).map(|i| vec![i, i + 1]).collect())
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    /// Kernel order `m`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of components `K`.
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Full contraction of the signature tuples.
    pub fn notation(&self) -> EinsumNotation {
        EinsumNotation::scalar(self.tuples.clone())
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.tuples.iter().map(|t| t.iter().map(|i| i + 1).collect()).collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .to_one_based()
            .iter()
            .map(|t| t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        f.write_str(&parts.join(", "))
    }
}
