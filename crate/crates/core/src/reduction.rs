//! Face rings modulo the moment-curve linear system of parameters.
//!
//! Vertex `j` (one-based) carries the face-ring variable `x_j` and the
//! parameter `t_j`, which is the ring variable of index `j - 1` in
//! [`RationalFunction`]. The linear forms are `θ_i = Σ_j t_j^i x_j` for
//! `i = 1..=d`, i.e. vertex `j` sits at `(t_j, t_j^2, ..., t_j^d)` on the
//! moment curve.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{greedy_independent, Echelon, Matrix};
use crate::scalars::{BaseField, Field, Monomial, RationalFunction};

/// The moment-curve parameters `t_1, ..., t_n` and the number `d` of linear
/// forms, over a field that contains the `t_j` (a rational function field for
/// symbolic work, or a plain field once the parameters are numbers).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: serde::de::DeserializeOwned"))]
pub struct MomentCurveLsop<F> {
    n: usize,
    d: usize,
    params: Vec<F>,
}

impl<C: BaseField> MomentCurveLsop<RationalFunction<C>> {
    /// Symbolic parameters: `t_j` is the indeterminate of index `j - 1`.
    pub fn symbolic(n: usize, d: usize) -> Result<Self> {
        Self::with_params(d, (0..n).map(RationalFunction::var).collect())
    }
}

impl<F: Field> MomentCurveLsop<F> {
    pub fn with_params(d: usize, params: Vec<F>) -> Result<Self> {
        let n = params.len();
        if d == 0 || d > n {
            return Err(Error::Dimension(format!("need 1 <= d <= n, got d = {d}, n = {n}")));
        }
        for (i, a) in params.iter().enumerate() {
            if a.is_zero() || params[i + 1..].contains(a) {
                return Err(Error::Domain("moment-curve parameters must be distinct and nonzero".into()));
            }
        }
        Ok(MomentCurveLsop { n, d, params })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn params(&self) -> &[F] {
        &self.params
    }

    /// `t_v` for the one-based vertex `v`.
    pub fn param(&self, v: usize) -> &F {
        &self.params[v - 1]
    }

    /// Coefficient of `x_v` in `θ_i`, that is `t_v^i`.
    pub fn coefficient(&self, i: usize, v: usize) -> F {
        self.param(v).pow(i as u64)
    }

    /// Coefficient row of `θ_i` (`1 <= i <= d`).
    pub fn theta(&self, i: usize) -> Vec<F> {
        (1..=self.n).map(|v| self.coefficient(i, v)).collect()
    }

    /// The `d × n` realization matrix whose column `j` is `(t_j, ..., t_j^d)`.
    pub fn v_matrix(&self) -> Matrix<F> {
        Matrix::from_fn(self.d, self.n, |i, j| self.coefficient(i + 1, j + 1))
    }

    /// Determinant of the minor of the realization matrix on the columns of
    /// `face`, computed by elimination.
    pub fn moment_minor_det(&self, face: Face) -> Result<F> {
        if face.len() != self.d {
            return Err(Error::Dimension(format!("face {face} does not have {} vertices", self.d)));
        }
        if face.max_vertex() > self.n {
            return Err(Error::Dimension(format!("face {face} uses a vertex beyond {}", self.n)));
        }
        let cols: Vec<usize> = face.vertices().map(|v| v - 1).collect();
        Ok(self.v_matrix().select_columns(&cols).det())
    }

    /// Same parameters mapped into another field.
    pub fn map<G: Field>(&self, f: impl FnMut(&F) -> G) -> MomentCurveLsop<G> {
        MomentCurveLsop {
            n: self.n,
            d: self.d,
            params: self.params.iter().map(f).collect(),
        }
    }
}

/// Degree-`k` part of the Artinian reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: serde::de::DeserializeOwned"))]
pub struct GradedPiece<F> {
    k: usize,
    /// Every face-supported monomial of degree `k`, in preference order:
    /// squarefree monomials first (by face order), then the rest by
    /// decreasing graded lexicographic order.
    monomials: Vec<Monomial>,
    #[serde(skip)]
    index: HashMap<Monomial, usize>,
    /// Positions (in `monomials`) of the basis monomials.
    basis: Vec<usize>,
    /// Coordinates of each monomial in the basis.
    expansions: Vec<Vec<F>>,
}

impl<F: Field> GradedPiece<F> {
    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn basis_monomials(&self) -> Vec<&Monomial> {
        self.basis.iter().map(|&i| &self.monomials[i]).collect()
    }

    /// Coordinates of a monomial; zero when its support is not a face.
    pub fn expand(&self, m: &Monomial) -> Vec<F> {
        match self.index.get(m) {
            Some(&i) => self.expansions[i].clone(),
            None => vec![F::zero(); self.dim()],
        }
    }

    pub fn is_face_monomial(&self, m: &Monomial) -> bool {
        self.index.contains_key(m)
    }

    fn rebuild_index(&mut self) {
        self.index = self
            .monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
    }
}

/// `A*(K) = k[K] / (θ_1, ..., θ_d)`, built degree by degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: serde::de::DeserializeOwned"))]
pub struct ArtinianAlgebra<F> {
    complex: SimplicialComplex,
    lsop: MomentCurveLsop<F>,
    pieces: Vec<GradedPiece<F>>,
}

/// The support of a monomial in variable indices, as a face.
pub fn monomial_support(m: &Monomial) -> Face {
    Face::from_bits(m.support().fold(0u64, |acc, v| acc | 1 << v))
}

/// The squarefree monomial `x_σ`.
pub fn face_monomial(face: Face) -> Monomial {
    let n = face.max_vertex();
    Monomial::from_exps((1..=n).map(|v| u16::from(face.contains(v))))
}

/// Monomial with the given exponents on one-based vertices.
pub fn vertex_monomial(exps: &[(usize, u16)]) -> Monomial {
    let n = exps.iter().map(|(v, _)| *v).max().unwrap_or(0);
    let mut e = vec![0u16; n];
    for &(v, x) in exps {
        e[v - 1] += x;
    }
    Monomial::from_exps(e)
}

/// All monomials of degree `k` whose support is a face, in preference order.
pub fn face_monomials(complex: &SimplicialComplex, k: usize) -> Vec<Monomial> {
    let mut squarefree: Vec<(Face, Monomial)> = complex
        .faces_of_size(k)
        .iter()
        .map(|f| (*f, face_monomial(*f)))
        .collect();
    squarefree.sort_by(|a, b| a.0.cmp(&b.0));
    let mut rest = Vec::new();
    for s in 1..k.min(complex.max_facet_size() + 1) {
        for &f in complex.faces_of_size(s) {
            // distribute k - s extra units over the vertices of f
            let vs = f.to_vec();
            let mut extra = vec![0u16; vs.len()];
            distribute(k - s, 0, &mut extra, &mut |e| {
                let exps: Vec<(usize, u16)> = vs.iter().zip(e).map(|(&v, &x)| (v, x + 1)).collect();
                rest.push(vertex_monomial(&exps));
            });
        }
    }
    rest.sort_by(|a, b| b.cmp(a));
    squarefree.into_iter().map(|(_, m)| m).chain(rest).collect()
}

fn distribute(left: usize, pos: usize, slots: &mut Vec<u16>, emit: &mut dyn FnMut(&[u16])) {
    if pos + 1 == slots.len() {
        slots[pos] = left as u16;
        emit(slots);
        slots[pos] = 0;
        return;
    }
    for x in 0..=left {
        slots[pos] = x as u16;
        distribute(left - x, pos + 1, slots, emit);
    }
    slots[pos] = 0;
}

impl<F: Field> ArtinianAlgebra<F> {
    /// Builds `A^0, ..., A^{up_to}` for a complex on the lsop's vertices.
    pub fn build(complex: &SimplicialComplex, lsop: &MomentCurveLsop<F>, up_to: usize) -> Result<Self> {
        if complex.n() != lsop.n() {
            return Err(Error::Dimension(format!(
                "complex has {} vertices but the parameters cover {}",
                complex.n(),
                lsop.n()
            )));
        }
        if complex.max_facet_size() > lsop.d() {
            return Err(Error::Dimension(format!(
                "complex has faces with more than {} vertices",
                lsop.d()
            )));
        }
        let mut pieces: Vec<GradedPiece<F>> = Vec::with_capacity(up_to + 1);
        for k in 0..=up_to {
            let piece = build_piece(complex, lsop, k, pieces.last());
            pieces.push(piece);
        }
        Ok(ArtinianAlgebra {
            complex: complex.clone(),
            lsop: lsop.clone(),
            pieces,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn lsop(&self) -> &MomentCurveLsop<F> {
        &self.lsop
    }

    pub fn built_degree(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn piece(&self, k: usize) -> Result<&GradedPiece<F>> {
        self.pieces.get(k).ok_or(Error::Range {
            degree: k,
            built: self.built_degree(),
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.dim()).collect()
    }

    /// Coordinates of a monomial in the basis of its degree.
    pub fn expand(&self, m: &Monomial) -> Result<Vec<F>> {
        Ok(self.piece(m.degree() as usize)?.expand(m))
    }

    /// Coordinates of the product of two monomials.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Result<Vec<F>> {
        self.expand(&a.mul(b))
    }

    /// Product of `u ∈ A^j` and `v ∈ A^k`, given by coordinates.
    pub fn multiply(&self, j: usize, u: &[F], k: usize, v: &[F]) -> Result<Vec<F>> {
        let target = self.piece(j + k)?;
        let pj = self.piece(j)?;
        let pk = self.piece(k)?;
        if u.len() != pj.dim() || v.len() != pk.dim() {
            return Err(Error::Dimension("coordinate vector has the wrong length".into()));
        }
        let mut out = vec![F::zero(); target.dim()];
        for (a, ua) in pj.basis_monomials().into_iter().zip(u) {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in pk.basis_monomials().into_iter().zip(v) {
                if vb.is_zero() {
                    continue;
                }
                let w = target.expand(&a.mul(b));
                let c = ua.clone() * vb.clone();
                for (slot, x) in out.iter_mut().zip(w) {
                    if !x.is_zero() {
                        *slot = slot.clone() + c.clone() * x;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coordinates in `A^1` of the image of `θ_i`.
    pub fn theta_image(&self, i: usize) -> Result<Vec<F>> {
        let p1 = self.piece(1)?;
        let mut out = vec![F::zero(); p1.dim()];
        for v in 1..=self.lsop.n() {
            let w = p1.expand(&vertex_monomial(&[(v, 1)]));
            let c = self.lsop.coefficient(i, v);
            for (slot, x) in out.iter_mut().zip(w) {
                *slot = slot.clone() + c.clone() * x;
            }
        }
        Ok(out)
    }

    /// Restores lookup tables after deserialization.
    pub fn rebuild_indexes(&mut self) {
        for p in &mut self.pieces {
            p.rebuild_index();
        }
    }
}

fn build_piece<F: Field>(
    complex: &SimplicialComplex,
    lsop: &MomentCurveLsop<F>,
    k: usize,
    previous: Option<&GradedPiece<F>>,
) -> GradedPiece<F> {
    let monomials = face_monomials(complex, k);
    let count = monomials.len();
    let mut piece = GradedPiece {
        k,
        monomials,
        index: HashMap::new(),
        basis: Vec::new(),
        expansions: Vec::new(),
    };
    piece.rebuild_index();
    if count == 0 {
        return piece;
    }
    let Some(prev) = previous else {
        // degree zero: the constant 1
        piece.basis = vec![0];
        piece.expansions = vec![vec![F::one()]];
        return piece;
    };
    // squarefree monomials come first and span; every other monomial is
    // rewritten in terms of them before eliminating
    let s = piece.monomials.iter().take_while(|m| m.is_squarefree()).count();
    let mut rewriter = Rewriter {
        lsop,
        piece: &piece,
        s,
        memo: HashMap::new(),
    };
    // columns in reversed preference order, so the free columns of the echelon
    // form are the most preferred squarefree monomials
    let col_of = |i: usize| s - 1 - i;
    let mut ech = Echelon::new(s);
    'rows: for m in prev.monomials() {
        for i in 1..=lsop.d() {
            if ech.rank() == s {
                break 'rows;
            }
            let mut row = vec![F::zero(); s];
            for v in 1..=lsop.n() {
                let prod = m.mul(&Monomial::var(v - 1));
                if !piece.index.contains_key(&prod) {
                    continue;
                }
                let c = lsop.coefficient(i, v);
                for (j, x) in rewriter.rewrite(&prod) {
                    let slot = &mut row[col_of(j)];
                    *slot = slot.clone() + c.clone() * x;
                }
            }
            ech.insert(&row);
        }
    }
    let red = Matrix::from_rows(ech.into_rows(), s).rref();
    let free = red.free_columns();
    let mut basis: Vec<usize> = free.iter().map(|&c| col_of(c)).collect();
    basis.sort_unstable();
    let position: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut square = vec![vec![F::zero(); basis.len()]; s];
    for (&m, &i) in &position {
        square[m][i] = F::one();
    }
    for (r, &pc) in red.pivots.iter().enumerate() {
        let m = col_of(pc);
        for &fc in &free {
            let x = red.matrix.get(r, fc);
            if !x.is_zero() {
                square[m][position[&col_of(fc)]] = -x.clone();
            }
        }
    }
    let mut expansions = square.clone();
    for idx in s..count {
        let m = piece.monomials[idx].clone();
        let mut e = vec![F::zero(); basis.len()];
        for (j, x) in rewriter.rewrite(&m) {
            for (slot, y) in e.iter_mut().zip(&square[j]) {
                if !y.is_zero() {
                    *slot = slot.clone() + x.clone() * y.clone();
                }
            }
        }
        expansions.push(e);
    }
    piece.basis = basis;
    piece.expansions = expansions;
    piece
}

/// Rewrites face monomials as combinations of squarefree face monomials of the
/// same degree, modulo the linear forms.
///
/// For a `d`-set `F` of vertices the forms can be solved for the `x_v` with
/// `v ∈ F`, giving `x_v ≡ Σ_{w ∉ F} c_{vw} x_w` with
/// `c_{vw} = -(t_w / t_v) Π_{u ∈ F, u ≠ v} (t_w - t_u) / (t_v - t_u)`.
/// Applied to a repeated variable with `F` containing the support, each step
/// enlarges the support, so the recursion ends at squarefree monomials.
struct Rewriter<'a, F> {
    lsop: &'a MomentCurveLsop<F>,
    piece: &'a GradedPiece<F>,
    s: usize,
    memo: HashMap<Monomial, Vec<(usize, F)>>,
}

impl<F: Field> Rewriter<'_, F> {
    fn rewrite(&mut self, m: &Monomial) -> Vec<(usize, F)> {
        let Some(&idx) = self.piece.index.get(m) else {
            return Vec::new();
        };
        if idx < self.s {
            return vec![(idx, F::one())];
        }
        if let Some(hit) = self.memo.get(m) {
            return hit.clone();
        }
        let (n, d) = (self.lsop.n(), self.lsop.d());
        let support = monomial_support(m);
        let v = m.support().find(|&i| m.exp(i) >= 2).expect("not squarefree") + 1;
        let mut frame = support.to_vec();
        for u in 1..=n {
            if frame.len() >= d {
                break;
            }
            if !support.contains(u) {
                frame.push(u);
            }
        }
        let frame = Face::of(&frame);
        let lowered = m.with_exp(v - 1, m.exp(v - 1) - 1);
        let tv = self.lsop.param(v).clone();
        let mut acc: Vec<F> = vec![F::zero(); self.s];
        for w in 1..=n {
            if frame.contains(w) {
                continue;
            }
            let next = lowered.mul(&Monomial::var(w - 1));
            if !self.piece.index.contains_key(&next) {
                continue;
            }
            let tw = self.lsop.param(w).clone();
            let mut num = -tw.clone();
            let mut den = tv.clone();
            for u in frame.vertices().filter(|&u| u != v) {
                let tu = self.lsop.param(u);
                num = num * (tw.clone() - tu.clone());
                den = den * (tv.clone() - tu.clone());
            }
            let c = num * den.inverse().expect("parameters are distinct and nonzero");
            for (j, x) in self.rewrite(&next) {
                acc[j] = acc[j].clone() + c.clone() * x;
            }
        }
        let out: Vec<(usize, F)> = acc.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        self.memo.insert(m.clone(), out.clone());
        out
    }
}

/// Picks the first squarefree face monomials of degree `k` whose coordinate
/// vectors are independent.
pub fn squarefree_basis<F: Field>(piece: &GradedPiece<F>, complex: &SimplicialComplex) -> Vec<Face> {
    let faces = complex.faces_of_size(piece.degree());
    let vectors: Vec<Vec<F>> = faces.iter().map(|f| piece.expand(&face_monomial(*f))).collect();
    greedy_independent(&vectors, piece.dim())
        .into_iter()
        .map(|i| faces[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;
    use crate::scalars::{Fp, Rational};
    use num_traits::Zero;

    type QF = RationalFunction<Rational>;

    #[test]
    fn theta_rows() {
        let lsop = MomentCurveLsop::<QF>::symbolic(3, 2).unwrap();
        let t = |i: usize| QF::var(i);
        assert_eq!(lsop.theta(1), vec![t(0), t(1), t(2)]);
        assert_eq!(lsop.theta(2), vec![&t(0) * &t(0), &t(1) * &t(1), &t(2) * &t(2)]);
        assert!(MomentCurveLsop::<QF>::symbolic(2, 3).is_err());
    }

    #[test]
    fn minor_of_two_columns() {
        let lsop = MomentCurveLsop::<QF>::symbolic(2, 2).unwrap();
        let det = lsop.moment_minor_det(Face::of(&[1, 2])).unwrap();
        let t = |i: usize| QF::var(i);
        let expected = &(&t(0) * &t(1)) * &(&t(1) - &t(0));
        assert_eq!(det, expected);
    }

    #[test]
    fn face_monomial_preference() {
        let k = generators::simplex_boundary(2);
        let ms = face_monomials(&k, 2);
        // three edges, then x1^2, x2^2, x3^2
        assert_eq!(ms.len(), 6);
        assert!(ms[..3].iter().all(|m| m.is_squarefree()));
        assert_eq!(ms[3], vertex_monomial(&[(1, 2)]));
    }

    #[test]
    fn triangle_dims_symbolic() {
        let k = generators::simplex_boundary(2);
        let lsop = MomentCurveLsop::<QF>::symbolic(3, 2).unwrap();
        let a = ArtinianAlgebra::build(&k, &lsop, 3).unwrap();
        assert_eq!(a.dims(), vec![1, 1, 1, 0]);
        // θ_1 dies
        assert!(a.theta_image(1).unwrap().iter().all(|x| x.is_zero()));
        // x1 x3 is a face of the triangle boundary; x1 x2 x3 is not
        assert!(a.expand(&vertex_monomial(&[(1, 1), (2, 1), (3, 1)])).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn numeric_dims_over_finite_field() {
        type F = Fp<101>;
        let k = generators::cross_polytope(3);
        let params: Vec<F> = (2..8).map(F::new).collect();
        let lsop = MomentCurveLsop::with_params(3, params).unwrap();
        let a = ArtinianAlgebra::build(&k, &lsop, 4).unwrap();
        assert_eq!(a.dims(), vec![1, 3, 3, 1, 0]);
    }
}
