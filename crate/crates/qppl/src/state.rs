//! The two-layer probability model: a classical distribution over branches,
//! each branch a length-1 vector of signed amplitudes over the basis states
//! of the live variables.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for state invariants (unit norm, total probability, trace).
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance for exact algebraic identities evaluated in floating point.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Branches and outcomes with probability at or below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Largest number of simultaneously live bits the dense simulator accepts.
pub const MAX_LIVE_BITS: usize = 24;

/// Ordered live variables. The first-declared variable is the most
/// significant bit of a basis index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Environment {
    names: Vec<String>,
}

impl Environment {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut env = Environment::default();
        env.push_all(names)?;
        Ok(env)
    }

    fn push_all<I, S>(&mut self, names: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut grown = self.names.clone();
        for name in names {
            let name = name.into();
            if grown.contains(&name) {
                return Err(Error::DuplicateVariable(name));
            }
            grown.push(name);
        }
        if grown.len() > MAX_LIVE_BITS {
            return Err(Error::Capacity {
                needed: grown.len(),
                limit: MAX_LIVE_BITS,
            });
        }
        self.names = grown;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of basis states, `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Mask selecting `name`'s bit in a basis index.
    pub fn mask(&self, name: &str) -> Result<usize> {
        self.position(name)
            .map(|i| 1 << (self.names.len() - 1 - i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Combined mask of several variables.
    pub fn mask_of<S: AsRef<str>>(&self, names: &[S]) -> Result<usize> {
        names
            .iter()
            .try_fold(0, |acc, n| Ok(acc | self.mask(n.as_ref())?))
    }

    /// Bit string of a basis index in environment order, e.g. `"10"`.
    pub fn bits(&self, index: usize) -> String {
        let n = self.names.len();
        (0..n)
            .map(|i| if index >> (n - 1 - i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Value of `name` in the world `index`.
    pub fn value(&self, name: &str, index: usize) -> Result<bool> {
        Ok(index & self.mask(name)? != 0)
    }
}

/// One branch's amplitude vector, indexed by basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState(Vec<f64>);

impl AmplitudeState {
    /// `|index⟩` in a space of `dim` basis states.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[index] = 1.0;
        AmplitudeState(v)
    }

    pub fn from_vec(amps: Vec<f64>) -> Self {
        AmplitudeState(amps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|q| q * q).sum()
    }

    pub fn inner_product(&self, other: &AmplitudeState) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    /// Index of the largest-magnitude amplitude.
    pub(crate) fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, q) in self.0.iter().enumerate() {
            if q.abs() > self.0[best].abs() {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub p: f64,
    pub amps: AmplitudeState,
}

/// A probability distribution over amplitude distributions. Branches with
/// equal vectors are kept apart: the state remembers its ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StateJson", try_from = "StateJson")]
pub struct TwoLayerState {
    pub(crate) env: Environment,
    pub(crate) branches: Vec<Branch>,
}

impl TwoLayerState {
    /// `[(1, |0…0⟩)]` over the given inputs.
    pub fn initial<S: AsRef<str>>(inputs: &[S]) -> Result<Self> {
        let env = Environment::new(inputs.iter().map(|s| s.as_ref().to_string()))?;
        let amps = AmplitudeState::basis(env.dim(), 0);
        Ok(TwoLayerState {
            env,
            branches: vec![Branch { p: 1.0, amps }],
        })
    }

    /// Build a state from raw parts, checking the invariants.
    pub fn from_branches(env: Environment, branches: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        let state = TwoLayerState {
            branches: branches
                .into_iter()
                .map(|(p, amps)| Branch {
                    p,
                    amps: AmplitudeState(amps),
                })
                .collect(),
            env,
        };
        state.check_invariants()?;
        Ok(state)
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn dim(&self) -> usize {
        self.env.dim()
    }

    /// Total probability, unit norm per branch, positive weights, and
    /// consistent dimensions.
    pub fn check_invariants(&self) -> Result<()> {
        let dim = self.env.dim();
        let mut total = 0.0;
        for (j, b) in self.branches.iter().enumerate() {
            if b.amps.len() != dim {
                return Err(Error::MalformedState(format!(
                    "branch {j} has {} amplitudes, expected {dim}",
                    b.amps.len()
                )));
            }
            if b.p.is_nan() || b.p <= 0.0 {
                return Err(Error::MalformedState(format!(
                    "branch {j} has non-positive probability {}",
                    b.p
                )));
            }
            let norm = b.amps.norm_sq();
            if (norm - 1.0).abs() > STATE_TOL {
                return Err(Error::MalformedState(format!(
                    "branch {j} has squared norm {norm}"
                )));
            }
            total += b.p;
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::MalformedState(format!(
                "branch probabilities sum to {total}"
            )));
        }
        Ok(())
    }

    /// Append fresh zero-initialised variables as the new low-order bits.
    pub fn extend<S: AsRef<str>>(&mut self, names: &[S]) -> Result<()> {
        let m = names.len();
        if m == 0 {
            return Ok(());
        }
        self.env
            .push_all(names.iter().map(|s| s.as_ref().to_string()))?;
        let dim = self.env.dim();
        for b in &mut self.branches {
            let mut out = vec![0.0; dim];
            for (k, q) in b.amps.0.iter().enumerate() {
                out[k << m] = *q;
            }
            b.amps = AmplitudeState(out);
        }
        Ok(())
    }

    /// `Σ_j p_j q_j q_jᵀ`. Dense, so only sensible for small environments.
    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.env.dim();
        let mut rho = DMatrix::zeros(dim, dim);
        for b in &self.branches {
            let q = b.amps.as_slice();
            for (r, qr) in q.iter().enumerate() {
                if *qr == 0.0 {
                    continue;
                }
                for (c, qc) in q.iter().enumerate() {
                    rho[(r, c)] += b.p * qr * qc;
                }
            }
        }
        DensityMatrix(rho)
    }

    /// Probability of observing each world: `P(x) = Σ_j p_j q_{j,x}²`.
    pub fn output_distribution(&self) -> Distribution {
        let mut probs = vec![0.0; self.env.dim()];
        for b in &self.branches {
            for (x, q) in b.amps.as_slice().iter().enumerate() {
                probs[x] += b.p * q * q;
            }
        }
        Distribution {
            env: self.env.clone(),
            probs,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    vars: Vec<String>,
    branches: Vec<BranchJson>,
}

#[derive(Serialize, Deserialize)]
struct BranchJson {
    p: f64,
    amps: Vec<f64>,
}

impl From<TwoLayerState> for StateJson {
    fn from(s: TwoLayerState) -> Self {
        StateJson {
            vars: s.env.names,
            branches: s
                .branches
                .into_iter()
                .map(|b| BranchJson {
                    p: b.p,
                    amps: b.amps.0,
                })
                .collect(),
        }
    }
}

impl TryFrom<StateJson> for TwoLayerState {
    type Error = Error;

    fn try_from(j: StateJson) -> Result<Self> {
        let env = Environment::new(j.vars)?;
        TwoLayerState::from_branches(env, j.branches.into_iter().map(|b| (b.p, b.amps)).collect())
    }
}

/// Exact distribution over the worlds of an environment.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub(crate) env: Environment,
    pub(crate) probs: Vec<f64>,
}

/// Distribution produced by the classical interpreter.
pub type ClassicalDistribution = Distribution;

impl Distribution {
    pub fn new(env: Environment, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != env.dim() {
            return Err(Error::DimensionMismatch {
                left: probs.len(),
                right: env.dim(),
            });
        }
        Ok(Distribution { env, probs })
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, world: usize) -> f64 {
        self.probs.get(world).copied().unwrap_or(0.0)
    }

    /// Probability of the world spelled as a bit string in environment order.
    pub fn get_bits(&self, bits: &str) -> f64 {
        if bits.len() != self.env.len() {
            return 0.0;
        }
        if bits.is_empty() {
            return self.get(0);
        }
        usize::from_str_radix(bits, 2).map(|k| self.get(k)).unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Worlds with probability above [`PRUNE_THRESHOLD`], ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, p)| *p > PRUNE_THRESHOLD)
    }

    /// Display label for a world: the bare bit for one variable,
    /// `name=bit` pairs for several, `()` for none.
    pub fn label(&self, world: usize) -> String {
        let names = self.env.names();
        match names.len() {
            0 => "()".to_string(),
            1 => self.env.bits(world),
            _ => names
                .iter()
                .zip(self.env.bits(world).chars())
                .map(|(n, b)| format!("{n}={b}"))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }

    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        let n = self.probs.len().max(other.probs.len());
        (0..n)
            .map(|k| (self.get(k) - other.get(k)).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.support() {
            writeln!(f, "{}: {:.6}", self.label(k), p)?;
        }
        Ok(())
    }
}

/// Real density matrix `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(pub(crate) DMatrix<f64>);

impl DensityMatrix {
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        Ok(DensityMatrix(m))
    }

    /// `|k⟩⟨k|` in a space of `dim` basis states.
    pub fn pure_basis(dim: usize, k: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(k, k)] = 1.0;
        DensityMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.0.diagonal().iter().copied().collect()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.0 - &other.0).amax()
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.0 - self.0.transpose()).amax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let sym = (&self.0 + self.0.transpose()) * 0.5;
        SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Symmetric, positive semidefinite, unit trace.
    pub fn check_invariants(&self) -> Result<()> {
        let asym = self.asymmetry();
        if asym > STATE_TOL {
            return Err(Error::MalformedState(format!("density matrix asymmetry {asym}")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::MalformedState(format!("density matrix trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -STATE_TOL {
            return Err(Error::MalformedState(format!(
                "density matrix has eigenvalue {min}"
            )));
        }
        Ok(())
    }
}
