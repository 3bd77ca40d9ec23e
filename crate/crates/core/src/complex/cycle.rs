use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::homology::{boundary_matrix, reduced_homology};
use super::{sorting_sign, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::scalars::rational::rational_residue;
use crate::scalars::{BaseField, Fp, Rational};

/// A weighted chain of faces with `d` vertices each, intended to have zero
/// boundary. Coefficients refer to the increasing orientation of each face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: serde::de::DeserializeOwned"))]
pub struct SimplicialCycle<C> {
    d: usize,
    coeffs: BTreeMap<Face, C>,
}

impl<C: BaseField> SimplicialCycle<C> {
    pub fn new<I: IntoIterator<Item = (Face, C)>>(d: usize, coeffs: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (f, c) in coeffs {
            if f.len() != d {
                return Err(Error::Dimension(format!("face {f} does not have {d} vertices")));
            }
            if !c.is_zero() {
                let slot = map.entry(f).or_insert_with(C::zero);
                *slot = slot.clone() + c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(SimplicialCycle { d, coeffs: map })
    }

    /// Builds a chain from vertex lists in arbitrary order; each coefficient is
    /// multiplied by the sign of the permutation sorting its list.
    pub fn from_oriented(d: usize, entries: &[(Vec<usize>, C)]) -> Result<Self> {
        let mut out = Vec::with_capacity(entries.len());
        for (vs, c) in entries {
            let sign = sorting_sign(vs);
            if sign == 0 {
                return Err(Error::InvalidComplex(format!("repeated vertex in {vs:?}")));
            }
            let f = Face::new(vs)?;
            out.push((f, if sign < 0 { -c.clone() } else { c.clone() }));
        }
        Self::new(d, out)
    }

    /// Number of vertices per face (the cycle has dimension `d - 1`).
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &BTreeMap<Face, C> {
        &self.coeffs
    }

    /// `μ_F`, zero when `F` is not supported.
    pub fn coeff(&self, f: Face) -> C {
        self.coeffs.get(&f).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn negate(&self) -> Self {
        SimplicialCycle {
            d: self.d,
            coeffs: self.coeffs.iter().map(|(f, c)| (*f, -c.clone())).collect(),
        }
    }

    /// The complex generated by the faces with nonzero coefficient, on the
    /// vertex set `1..=n`.
    pub fn support_on(&self, n: usize) -> Result<SimplicialComplex> {
        let faces: Vec<Face> = self.coeffs.keys().copied().collect();
        SimplicialComplex::new(n, &faces)
    }

    /// Support on the smallest vertex range containing it.
    pub fn support(&self) -> SimplicialComplex {
        let n = self.coeffs.keys().map(|f| f.max_vertex()).max().unwrap_or(0);
        self.support_on(n).expect("faces are valid")
    }

    /// First face with `d - 1` vertices at which the boundary is nonzero.
    pub fn boundary_failure(&self) -> Option<Face> {
        let mut sums: BTreeMap<Face, C> = BTreeMap::new();
        for (f, c) in &self.coeffs {
            for (sign, g) in f.boundary() {
                let term = if sign > 0 { c.clone() } else { -c.clone() };
                let slot = sums.entry(g).or_insert_with(C::zero);
                *slot = slot.clone() + term;
            }
        }
        sums.into_iter().find(|(_, s)| !s.is_zero()).map(|(g, _)| g)
    }

    pub fn check_cycle(&self) -> bool {
        self.boundary_failure().is_none()
    }

    pub fn require_cycle(&self) -> Result<()> {
        match self.boundary_failure() {
            Some(f) => Err(Error::NotACycle(f)),
            None => Ok(()),
        }
    }

    /// Renames vertices: `labels[i]` is the new label of old vertex `i + 1`.
    pub fn relabel(&self, labels: &[usize]) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.coeffs.len());
        for (f, c) in &self.coeffs {
            let vs: Vec<usize> = f.vertices().map(|v| labels[v - 1]).collect();
            entries.push((vs, c.clone()));
        }
        Self::from_oriented(self.d, &entries)
    }

    /// Drops vertices outside the support, relabeling the rest as `1..=m`
    /// in increasing order. Returns the compacted cycle and the old labels.
    pub fn compact(&self) -> (Self, Vec<usize>) {
        let used: Vec<usize> = self
            .coeffs
            .keys()
            .fold(Face::EMPTY, |acc, f| acc.union(*f))
            .to_vec();
        let mut labels = vec![0; used.last().copied().unwrap_or(0)];
        for (i, &v) in used.iter().enumerate() {
            labels[v - 1] = i + 1;
        }
        // an increasing relabeling preserves orientations
        let coeffs = self
            .coeffs
            .iter()
            .map(|(f, c)| {
                let g = Face::of(&f.vertices().map(|v| labels[v - 1]).collect::<Vec<_>>());
                (g, c.clone())
            })
            .collect();
        (SimplicialCycle { d: self.d, coeffs }, used)
    }

    /// The unique top-dimensional cycle on `complex` up to scale, when the
    /// top homology over `C` is one-dimensional. Over `Q` the coefficients
    /// are coprime integers; over `F_p` the first nonzero one is 1. In both
    /// cases the first facet carries a positive (or unit) coefficient.
    pub fn fundamental(complex: &SimplicialComplex) -> Result<Self> {
        let d = complex.max_facet_size();
        if d == 0 {
            return Err(Error::InvalidComplex("complex has no nonempty faces".into()));
        }
        let m = boundary_matrix::<C>(complex, d);
        let kernel = m.kernel();
        if kernel.len() != 1 {
            return Err(Error::InvalidComplex(format!(
                "top homology has dimension {}, not 1; supply coefficients explicitly",
                kernel.len()
            )));
        }
        let v = &kernel[0];
        let nonzero: Vec<&C> = v.iter().filter(|c| !c.is_zero()).collect();
        let s = C::canonical_scale(&nonzero);
        let faces = complex.faces_of_size(d);
        Self::new(d, faces.iter().zip(v).map(|(f, c)| (*f, c.clone() * s.clone())))
    }

    /// Checks the link condition: for every face `τ` of the support with
    /// `0 < |τ| < d`, the link has one-dimensional reduced homology in degree
    /// `d - 1 - |τ|` over `C`.
    pub fn check_condition_star(&self) -> Result<ConditionStarReport> {
        self.require_cycle()?;
        let support = self.support();
        let mut entries = Vec::new();
        let mut first_failure = None;
        for k in 1..self.d {
            for &tau in support.faces_of_size(k) {
                let link = support.link(tau)?;
                let h = reduced_homology::<C>(&link);
                let degree = self.d as i64 - 1 - k as i64;
                let dim = h.dim(degree);
                let passed = dim == 1;
                if !passed && first_failure.is_none() {
                    first_failure = Some(StarFailure { face: tau, degree, dim });
                }
                entries.push(StarEntry {
                    face: tau,
                    degree,
                    dim,
                    passed,
                });
            }
        }
        Ok(ConditionStarReport {
            entries,
            first_failure,
            components: support.components().len(),
        })
    }
}

impl SimplicialCycle<Rational> {
    /// Coefficientwise reduction modulo `P`; fails on non-integral entries.
    pub fn reduce<const P: u64>(&self) -> Result<SimplicialCycle<Fp<P>>> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (f, c) in &self.coeffs {
            let r = rational_residue::<P>(c).ok_or(Error::NotPIntegral(P))?;
            coeffs.push((*f, r));
        }
        SimplicialCycle::new(self.d, coeffs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarEntry {
    pub face: Face,
    pub degree: i64,
    pub dim: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarFailure {
    pub face: Face,
    pub degree: i64,
    pub dim: usize,
}

/// Outcome of the link condition, face by face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionStarReport {
    pub entries: Vec<StarEntry>,
    pub first_failure: Option<StarFailure>,
    /// Connected components of the support.
    pub components: usize,
}

impl ConditionStarReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}
