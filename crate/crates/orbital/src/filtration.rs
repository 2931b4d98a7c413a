//! Stable filtrations 0 < W_1 < ... < W_l < V of the form space, with a
//! plain-text on-disk format.
//!
//! File format (text, line-oriented):
//!   line 1: `filtration v1`
//!   line 2: `m d q l`
//!   then for each i = 1..=l: a line with dim W_i, followed by that many
//!   lines, each a digit string of length N giving a reduced-echelon basis
//!   row in monomial order (digits < q, so q <= 10).

use crate::group::GroupSpec;
use crate::OrbitalError;
use std::io::{BufRead, BufReader, Read, Write};
use std::sync::Arc;
use symspace::{find_submodules, is_g_stable, MonomialBasis, Subspace};

/// A strictly increasing chain of proper nonzero G-stable subspaces.
/// An empty chain is allowed and makes the enumeration fall back to the
/// naive baseline.
#[derive(Clone)]
pub struct Filtration {
    subspaces: Vec<Subspace>,
}

impl Filtration {
    pub fn empty() -> Self {
        Filtration {
            subspaces: Vec::new(),
        }
    }

    /// Validates strict inclusion, properness, and stability under the
    /// group's generators.
    pub fn new(group: &GroupSpec, subspaces: Vec<Subspace>) -> Result<Self, OrbitalError> {
        for (i, w) in subspaces.iter().enumerate() {
            if w.dim() == 0 {
                return Err(OrbitalError::InvalidFiltration(format!(
                    "W_{} is the zero subspace",
                    i + 1
                )));
            }
            if w.dim() == w.ambient_dim() {
                return Err(OrbitalError::InvalidFiltration(format!(
                    "W_{} is the whole space",
                    i + 1
                )));
            }
            if i > 0 {
                let prev = &subspaces[i - 1];
                if !(prev.is_subspace_of(w) && prev.dim() < w.dim()) {
                    return Err(OrbitalError::InvalidFiltration(format!(
                        "W_{} does not strictly contain W_{}",
                        i + 1,
                        i
                    )));
                }
            }
            if !is_g_stable(w, group.generators()) {
                return Err(OrbitalError::InvalidFiltration(format!(
                    "W_{} is not stable under the group",
                    i + 1
                )));
            }
        }
        Ok(Filtration { subspaces })
    }

    /// Builds the longest stable chain found by the random submodule
    /// search: all discovered submodules that nest into a single chain.
    pub fn auto(
        group: &GroupSpec,
        basis: &Arc<MonomialBasis>,
        attempts: u32,
        seed: u64,
    ) -> Result<Self, OrbitalError> {
        let subs = find_submodules(group.generators(), basis, group.field(), attempts, seed);
        let mut chain: Vec<Subspace> = Vec::new();
        for s in subs {
            // `find_submodules` returns ascending dimension
            if chain.last().map_or(true, |p| p.is_subspace_of(&s) && p.dim() < s.dim()) {
                chain.push(s);
            }
        }
        Filtration::new(group, chain)
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    /// W_i for i = 1..=len.
    pub fn w(&self, i: usize) -> &Subspace {
        &self.subspaces[i - 1]
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<(), OrbitalError> {
        let (m, d, q) = match self.subspaces.first() {
            Some(w) => (
                w.basis().m(),
                w.basis().d(),
                w.field().q(),
            ),
            None => {
                return Err(OrbitalError::Format(
                    "cannot serialize an empty filtration".into(),
                ))
            }
        };
        if q > 10 {
            return Err(OrbitalError::Format(
                "digit-string format requires q <= 10".into(),
            ));
        }
        writeln!(out, "filtration v1")?;
        writeln!(out, "{} {} {} {}", m, d, q, self.subspaces.len())?;
        for w in &self.subspaces {
            writeln!(out, "{}", w.dim())?;
            for i in 0..w.dim() {
                let row: String = w
                    .basis_vec(i)
                    .iter()
                    .map(|&c| char::from_digit(c as u32, 10).unwrap())
                    .collect();
                writeln!(out, "{}", row)?;
            }
        }
        Ok(())
    }

    /// Reads and fully validates a filtration against the given group and
    /// monomial basis.
    pub fn read_from(
        group: &GroupSpec,
        basis: &Arc<MonomialBasis>,
        input: impl Read,
    ) -> Result<Self, OrbitalError> {
        let mut lines = BufReader::new(input).lines();
        let mut next = |what: &str| -> Result<String, OrbitalError> {
            lines
                .next()
                .ok_or_else(|| OrbitalError::Format(format!("unexpected end of file: {what}")))?
                .map_err(OrbitalError::Io)
        };
        let magic = next("magic line")?;
        if magic.trim() != "filtration v1" {
            return Err(OrbitalError::Format(format!(
                "bad magic line {magic:?}, expected \"filtration v1\""
            )));
        }
        let header = next("header line")?;
        let nums: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| OrbitalError::Format(format!("bad header {header:?}: {e}")))?;
        let [m, d, q, l] = nums[..] else {
            return Err(OrbitalError::Format(format!(
                "header must have 4 fields, got {header:?}"
            )));
        };
        if m as usize != basis.m() || d as u32 != basis.d() {
            return Err(OrbitalError::Format(format!(
                "file is for ({m} vars, degree {d}), expected ({}, {})",
                basis.m(),
                basis.d()
            )));
        }
        if q != group.field().q() as u64 {
            return Err(OrbitalError::Format(format!(
                "file is for q = {q}, group is over q = {}",
                group.field().q()
            )));
        }
        let n = basis.size();
        let mut subspaces = Vec::new();
        for i in 0..l {
            let dim: usize = next("subspace dimension")?
                .trim()
                .parse()
                .map_err(|e| OrbitalError::Format(format!("bad dimension for W_{}: {e}", i + 1)))?;
            let mut rows = Vec::with_capacity(dim);
            for _ in 0..dim {
                let line = next("basis row")?;
                let row: Vec<u16> = line
                    .trim()
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .filter(|&v| v < q as u32)
                            .map(|v| v as u16)
                            .ok_or_else(|| {
                                OrbitalError::Format(format!("bad digit {c:?} in basis row"))
                            })
                    })
                    .collect::<Result<_, _>>()?;
                if row.len() != n {
                    return Err(OrbitalError::Format(format!(
                        "basis row has {} digits, expected {}",
                        row.len(),
                        n
                    )));
                }
                rows.push(row);
            }
            let sub = Subspace::from_rows(Arc::clone(basis), Arc::clone(group.field()), rows);
            if sub.dim() != dim {
                return Err(OrbitalError::Format(format!(
                    "W_{} rows are dependent: {} independent of {} listed",
                    i + 1,
                    sub.dim(),
                    dim
                )));
            }
            subspaces.push(sub);
        }
        Filtration::new(group, subspaces)
    }
}
