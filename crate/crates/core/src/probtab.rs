//! Dense joint distributions over named finite variables and the information
//! measures built on them.
//!
//! Tables are row-major with the last variable varying fastest. All entropies
//! are in bits (base-2 logarithms) with the convention `0 log 0 = 0`.
//! Distributions are validated eagerly at construction and never silently
//! renormalized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization tolerance enforced at construction.
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Largest number of variables an [`EntropyVector`] supports.
pub const ENTROPY_VECTOR_MAX_VARS: usize = 12;

/// A named finite discrete variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub cardinality: usize,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, cardinality: usize) -> Self {
        Self {
            name: name.into(),
            cardinality,
        }
    }
}

/// A joint probability table over an ordered list of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    variables: Vec<VariableSpec>,
    table: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistributionJson {
    variables: Vec<VariableSpec>,
    probabilities: Vec<f64>,
}

impl Distribution {
    /// Validates and wraps a dense table. Entries must be nonnegative, sum to
    /// one within `1e-12`, and the length must equal the product of the
    /// cardinalities.
    pub fn new(variables: Vec<VariableSpec>, table: Vec<f64>) -> Result<Self> {
        let mut size: usize = 1;
        for (i, v) in variables.iter().enumerate() {
            if v.cardinality == 0 {
                return Err(Error::InvalidDistribution(format!(
                    "variable `{}` has cardinality 0",
                    v.name
                )));
            }
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::InvalidDistribution(format!(
                    "duplicate variable name `{}`",
                    v.name
                )));
            }
            size = size.checked_mul(v.cardinality).ok_or_else(|| {
                Error::Capacity(format!("table size overflow at variable `{}`", v.name))
            })?;
        }
        if table.len() != size {
            return Err(Error::InvalidDistribution(format!(
                "table length {} does not match cardinality product {}",
                table.len(),
                size
            )));
        }
        let mut sum = 0.0;
        for &p in &table {
            if !(p >= 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "negative or NaN entry {p}"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        Ok(Self { variables, table })
    }

    /// Uniform distribution over the given variables.
    pub fn uniform(variables: Vec<VariableSpec>) -> Result<Self> {
        let size: usize = variables.iter().map(|v| v.cardinality).product();
        if size == 0 {
            return Err(Error::InvalidDistribution("empty table".into()));
        }
        Self::new(variables, vec![1.0 / size as f64; size])
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.variables.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Index of a variable by name.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Row-major strides, last variable fastest.
    pub fn strides(&self) -> Vec<usize> {
        let n = self.variables.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.variables[i + 1].cardinality;
        }
        strides
    }

    /// Probability of a full assignment (one value per variable, in order).
    pub fn prob(&self, assignment: &[usize]) -> Result<f64> {
        if assignment.len() != self.variables.len() {
            return Err(Error::Shape(format!(
                "assignment length {} vs {} variables",
                assignment.len(),
                self.variables.len()
            )));
        }
        let strides = self.strides();
        let mut idx = 0usize;
        for (i, (&a, v)) in assignment.iter().zip(&self.variables).enumerate() {
            if a >= v.cardinality {
                return Err(Error::InvalidArgument(format!(
                    "value {a} out of range for `{}`",
                    self.variables[i].name
                )));
            }
            idx += a * strides[i];
        }
        Ok(self.table[idx])
    }

    fn resolve(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.index_of(n)).collect()
    }

    /// Decodes a flat table index into per-variable values.
    pub fn decode(&self, mut idx: usize, out: &mut [usize]) {
        for i in (0..self.variables.len()).rev() {
            let c = self.variables[i].cardinality;
            out[i] = idx % c;
            idx /= c;
        }
    }

    /// Marginal over `keep`, preserving the original variable order.
    pub fn marginal(&self, keep: &[&str]) -> Result<Distribution> {
        let keep_idx = self.resolve(keep)?;
        let kept: Vec<usize> = (0..self.variables.len())
            .filter(|i| keep_idx.contains(i))
            .collect();
        let out_vars: Vec<VariableSpec> = kept.iter().map(|&i| self.variables[i].clone()).collect();
        let out_size: usize = out_vars.iter().map(|v| v.cardinality).product();
        let out_strides = {
            let mut s = vec![1usize; kept.len()];
            for i in (0..kept.len().saturating_sub(1)).rev() {
                s[i] = s[i + 1] * out_vars[i + 1].cardinality;
            }
            s
        };
        let mut table = vec![0.0; out_size];
        let mut values = vec![0usize; self.variables.len()];
        for (idx, &p) in self.table.iter().enumerate() {
            self.decode(idx, &mut values);
            let mut o = 0usize;
            for (k, &vi) in kept.iter().enumerate() {
                o += values[vi] * out_strides[k];
            }
            table[o] += p;
        }
        Ok(Distribution {
            variables: out_vars,
            table,
        })
    }

    /// Conditions on an assignment of values and renormalizes the remaining
    /// slice. Fails if the conditioning event has probability zero.
    pub fn condition(&self, on: &[(&str, usize)]) -> Result<Distribution> {
        let mut cond: Vec<Option<usize>> = vec![None; self.variables.len()];
        for &(name, value) in on {
            let i = self.index_of(name)?;
            if value >= self.variables[i].cardinality {
                return Err(Error::InvalidArgument(format!(
                    "value {value} out of range for `{name}`"
                )));
            }
            cond[i] = Some(value);
        }
        let kept: Vec<usize> = (0..self.variables.len())
            .filter(|&i| cond[i].is_none())
            .collect();
        let out_vars: Vec<VariableSpec> = kept.iter().map(|&i| self.variables[i].clone()).collect();
        let out_size: usize = out_vars.iter().map(|v| v.cardinality).product::<usize>().max(1);
        let out_strides = {
            let mut s = vec![1usize; kept.len()];
            for i in (0..kept.len().saturating_sub(1)).rev() {
                s[i] = s[i + 1] * out_vars[i + 1].cardinality;
            }
            s
        };
        let mut table = vec![0.0; out_size];
        let mut norm = 0.0;
        let mut values = vec![0usize; self.variables.len()];
        for (idx, &p) in self.table.iter().enumerate() {
            self.decode(idx, &mut values);
            if (0..self.variables.len()).all(|i| cond[i].map_or(true, |v| values[i] == v)) {
                let mut o = 0usize;
                for (k, &vi) in kept.iter().enumerate() {
                    o += values[vi] * out_strides[k];
                }
                table[o] += p;
                norm += p;
            }
        }
        if norm <= 0.0 {
            return Err(Error::DegenerateEvent(norm));
        }
        for t in &mut table {
            *t /= norm;
        }
        Ok(Distribution {
            variables: out_vars,
            table,
        })
    }

    /// Shannon entropy (bits) of the marginal on `subset`.
    pub fn entropy(&self, subset: &[&str]) -> Result<f64> {
        let m = self.marginal(subset)?;
        Ok(shannon_entropy(&m.table))
    }

    fn check_disjoint(sets: &[&[&str]]) -> Result<()> {
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if let Some(name) = a.iter().find(|n| b.contains(n)) {
                    return Err(Error::InvalidArgument(format!(
                        "variable sets overlap at `{name}`"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Mutual information I(A:B) = H(A) + H(B) - H(A,B), in bits.
    pub fn mutual_information(&self, set_a: &[&str], set_b: &[&str]) -> Result<f64> {
        Self::check_disjoint(&[set_a, set_b])?;
        let ab: Vec<&str> = set_a.iter().chain(set_b.iter()).copied().collect();
        Ok(self.entropy(set_a)? + self.entropy(set_b)? - self.entropy(&ab)?)
    }

    /// Conditional mutual information I(A:B|C), in bits.
    pub fn conditional_mutual_information(
        &self,
        set_a: &[&str],
        set_b: &[&str],
        given: &[&str],
    ) -> Result<f64> {
        Self::check_disjoint(&[set_a, set_b, given])?;
        let ac: Vec<&str> = set_a.iter().chain(given.iter()).copied().collect();
        let bc: Vec<&str> = set_b.iter().chain(given.iter()).copied().collect();
        let abc: Vec<&str> = set_a
            .iter()
            .chain(set_b.iter())
            .chain(given.iter())
            .copied()
            .collect();
        Ok(self.entropy(&ac)? + self.entropy(&bc)? - self.entropy(&abc)? - self.entropy(given)?)
    }

    /// Tripartite (interaction) information
    /// I(A:B:C) = H(A,B,C) - H(A,B) - H(A,C) - H(B,C) + H(A) + H(B) + H(C).
    /// May be negative.
    pub fn tripartite_information(
        &self,
        set_a: &[&str],
        set_b: &[&str],
        set_c: &[&str],
    ) -> Result<f64> {
        Self::check_disjoint(&[set_a, set_b, set_c])?;
        let join = |sets: &[&[&str]]| -> Vec<&str> {
            sets.iter().flat_map(|s| s.iter().copied()).collect()
        };
        Ok(self.entropy(&join(&[set_a, set_b, set_c]))?
            - self.entropy(&join(&[set_a, set_b]))?
            - self.entropy(&join(&[set_a, set_c]))?
            - self.entropy(&join(&[set_b, set_c]))?
            + self.entropy(set_a)?
            + self.entropy(set_b)?
            + self.entropy(set_c)?)
    }

    /// The L1 measurement-dependence measure
    /// `M = sum |p(inputs, lambda) - p(inputs) p(lambda)|`, in `[0, 2]`.
    pub fn l1_md_measure(&self, inputs: &[&str], lambda: &str) -> Result<f64> {
        if inputs.contains(&lambda) {
            return Err(Error::InvalidArgument(format!(
                "`{lambda}` cannot be both an input and the source variable"
            )));
        }
        let mut all: Vec<&str> = inputs.to_vec();
        all.push(lambda);
        let joint = self.marginal(&all)?;
        let p_in = joint.marginal(inputs)?;
        let p_l = joint.marginal(&[lambda])?;
        let li = joint.index_of(lambda)?;
        let mut values = vec![0usize; joint.variables.len()];
        let in_strides = p_in.strides();
        // Map joint variable positions onto the input marginal's positions.
        let mut in_pos: Vec<Option<usize>> = vec![None; joint.variables.len()];
        for (k, v) in p_in.variables.iter().enumerate() {
            in_pos[joint.index_of(&v.name)?] = Some(k);
        }
        let mut m = 0.0;
        for (idx, &p) in joint.table.iter().enumerate() {
            joint.decode(idx, &mut values);
            let mut iidx = 0usize;
            for (pos, &val) in values.iter().enumerate() {
                if let Some(k) = in_pos[pos] {
                    iidx += val * in_strides[k];
                }
            }
            m += (p - p_in.table[iidx] * p_l.table[values[li]]).abs();
        }
        Ok(m)
    }

    /// The full entropy vector: H(S) for every nonempty subset S, indexed by
    /// bitmask over the variable order (coordinate `i` holds mask `i + 1`).
    pub fn entropy_vector(&self) -> Result<EntropyVector> {
        let n = self.variables.len();
        if n > ENTROPY_VECTOR_MAX_VARS {
            return Err(Error::Capacity(format!(
                "entropy vector limited to {ENTROPY_VECTOR_MAX_VARS} variables, got {n}"
            )));
        }
        let names = self.variable_names();
        let mut coords = Vec::with_capacity((1 << n) - 1);
        for mask in 1usize..(1 << n) {
            let subset: Vec<&str> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| names[i]).collect();
            coords.push(self.entropy(&subset)?);
        }
        Ok(EntropyVector {
            variables: names.iter().map(|s| s.to_string()).collect(),
            coords,
        })
    }

    /// Parses the JSON distribution format
    /// `{"variables":[{"name":"X","cardinality":2},...],"probabilities":[...]}`.
    pub fn from_json(json: &str) -> Result<Self> {
        let raw: DistributionJson = serde_json::from_str(json)?;
        Self::new(raw.variables, raw.probabilities)
    }

    /// Serializes to the JSON distribution format.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DistributionJson {
            variables: self.variables.clone(),
            probabilities: self.table.clone(),
        })
        .expect("distribution serialization cannot fail")
    }
}

/// Entropy in bits of a bare probability vector.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Entropy coordinates H(S) for all nonempty subsets of a variable set.
#[derive(Debug, Clone)]
pub struct EntropyVector {
    variables: Vec<String>,
    coords: Vec<f64>,
}

impl EntropyVector {
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// Coordinates in mask order: `coords()[i]` is H of the subset with
    /// bitmask `i + 1` over the variable order.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// H of the subset encoded by `mask` (bit i = variable i). `mask` must be
    /// nonzero.
    pub fn entropy_of_mask(&self, mask: usize) -> f64 {
        self.coords[mask - 1]
    }
}
