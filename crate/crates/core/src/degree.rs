//! The degree map on top-degree elements, Lee's formula for arbitrary
//! monomials, and the Gorenstein quotient by the kernel of the pairing.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::complex::{Face, SimplicialComplex, SimplicialCycle};
use crate::error::{Error, Result};
use crate::linalg::{dot, greedy_independent, span_rank, Matrix};
use crate::reduction::{face_monomial, face_monomials, monomial_support, ArtinianAlgebra, MomentCurveLsop};
use crate::scalars::{BaseField, FactoredTerm, Field, Monomial, RationalFunction, ScalarOver};

/// Linear factors appearing in volume elements on the moment curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lin {
    /// `t_j` for a vertex `j`
    T(usize),
    /// `ρ`
    R,
    /// `t_b - t_a` for `a < b`
    D(usize, usize),
    /// `t_j - ρ`
    Dr(usize),
}

/// `deg(x_F) = μ_F / |V|_F` on facets, extended to all degree-`d` monomials
/// by Lee's formula with the general-position point `(ρ, ρ^2, ..., ρ^d)`.
#[derive(Clone, Debug)]
pub struct DegreeFunctional<F> {
    lsop: MomentCurveLsop<F>,
    mu: BTreeMap<Face, F>,
    rho: F,
}

impl<C: BaseField> DegreeFunctional<RationalFunction<C>> {
    /// Symbolic parameters on the vertices of the cycle and `ρ = r`, the
    /// indeterminate following the `t_j`.
    pub fn symbolic(cycle: &SimplicialCycle<C>) -> Result<Self> {
        let n = cycle.support().n();
        let lsop = MomentCurveLsop::symbolic(n, cycle.d())?;
        Self::new(cycle, lsop, RationalFunction::var(n))
    }
}

impl<F: Field> DegreeFunctional<F> {
    pub fn new<C: BaseField>(cycle: &SimplicialCycle<C>, lsop: MomentCurveLsop<F>, rho: F) -> Result<Self>
    where
        F: ScalarOver<C>,
    {
        if cycle.d() != lsop.d() {
            return Err(Error::Dimension(format!(
                "cycle has facets with {} vertices but there are {} linear forms",
                cycle.d(),
                lsop.d()
            )));
        }
        let mu: BTreeMap<Face, F> = cycle.coeffs().iter().map(|(f, c)| (*f, F::from_base(c))).collect();
        if let Some(f) = mu.keys().find(|f| f.max_vertex() > lsop.n()) {
            return Err(Error::Dimension(format!("facet {f} uses a vertex without a parameter")));
        }
        for f in mu.keys() {
            if rho.is_zero() || f.vertices().any(|v| lsop.param(v) == &rho) {
                return Err(Error::DegenerateRho(*f));
            }
        }
        Ok(DegreeFunctional { lsop, mu, rho })
    }

    pub fn d(&self) -> usize {
        self.lsop.d()
    }

    pub fn n(&self) -> usize {
        self.lsop.n()
    }

    pub fn lsop(&self) -> &MomentCurveLsop<F> {
        &self.lsop
    }

    pub fn rho(&self) -> &F {
        &self.rho
    }

    /// Facets with nonzero coefficient and their coefficients.
    pub fn coefficients(&self) -> &BTreeMap<Face, F> {
        &self.mu
    }

    /// Value of a linear factor at the parameters of this functional.
    pub fn lin(&self, l: Lin) -> F {
        let t = |j: usize| self.lsop.param(j).clone();
        match l {
            Lin::T(j) => t(j),
            Lin::R => self.rho.clone(),
            Lin::D(a, b) => t(b) - t(a),
            Lin::Dr(j) => t(j) - self.rho.clone(),
        }
    }

    fn check_facet(&self, face: Face) -> Result<()> {
        if face.len() != self.d() {
            return Err(Error::Dimension(format!("face {face} does not have {} vertices", self.d())));
        }
        if face.max_vertex() > self.n() {
            return Err(Error::Dimension(format!("face {face} uses a vertex without a parameter")));
        }
        Ok(())
    }

    /// `|V|_F = Π t_j · Π_{a<b} (t_b - t_a)`.
    fn det_factors(face: Face) -> Vec<(Lin, i32)> {
        let vs = face.to_vec();
        let mut out: Vec<(Lin, i32)> = vs.iter().map(|&j| (Lin::T(j), 1)).collect();
        for (x, &a) in vs.iter().enumerate() {
            for &b in &vs[x + 1..] {
                out.push((Lin::D(a, b), 1));
            }
        }
        out
    }

    /// `[F - i]` as a sign and linear factors: the column of `i` becomes `ρ`.
    fn volume_factors(face: Face, i: usize) -> (i32, Vec<(Lin, i32)>) {
        let vs = face.to_vec();
        let pos = vs.iter().position(|&v| v == i).expect("vertex of the face");
        let mut out = vec![(Lin::R, 1)];
        for (x, &a) in vs.iter().enumerate() {
            if x == pos {
                continue;
            }
            out.push((Lin::T(a), 1));
            out.push((Lin::Dr(a), 1));
            for &b in &vs[x + 1..] {
                if b != i {
                    out.push((Lin::D(a, b), 1));
                }
            }
        }
        // each vertex before i contributes ρ - t_a = -(t_a - ρ)
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        (sign, out)
    }

    fn product(&self, sign: i32, factors: &[(Lin, i32)]) -> F {
        let mut acc = if sign < 0 { -F::one() } else { F::one() };
        for &(l, e) in factors {
            acc = acc * self.lin(l).powi(e as i64).expect("nonzero factor");
        }
        acc
    }

    /// `|V|_F` from the closed form.
    pub fn facet_det(&self, face: Face) -> Result<F> {
        self.check_facet(face)?;
        Ok(self.product(1, &Self::det_factors(face)))
    }

    /// The volume element `[F - i]`: the determinant of the realization
    /// minor on `F` with the column of `i` replaced by `(ρ, ..., ρ^d)`.
    pub fn volume_element(&self, face: Face, i: usize) -> Result<F> {
        self.check_facet(face)?;
        if !face.contains(i) {
            return Err(Error::MissingVertex { vertex: i, face });
        }
        let (sign, factors) = Self::volume_factors(face, i);
        Ok(self.product(sign, &factors))
    }

    /// `μ_F / |V|_F`.
    pub fn degree_facet(&self, face: Face) -> Result<F> {
        self.check_facet(face)?;
        match self.mu.get(&face) {
            None => Ok(F::zero()),
            Some(c) => Ok(c.clone() * self.facet_det(face)?.inverse().expect("parameters are distinct and nonzero")),
        }
    }

    /// The summand of Lee's formula for `x^α` belonging to the facet `face`.
    pub fn lee_term(&self, face: Face, alpha: &Monomial) -> Result<F> {
        self.check_facet(face)?;
        if !monomial_support(alpha).is_subset(face) {
            return Err(Error::Dimension(format!("monomial is not supported on {face}")));
        }
        let Some(c) = self.mu.get(&face) else {
            return Ok(F::zero());
        };
        F::sum_factored(&[self.lee_factors(face, c, alpha)]).ok_or(Error::DegenerateRho(face))
    }

    /// Lee's formula for `x^α` before evaluation: one signed coefficient
    /// `±μ_F` and a list of linear factors with exponents per facet.
    pub fn lee_expansion(&self, alpha: &Monomial) -> Vec<(F, Vec<(Lin, i32)>)> {
        let support = monomial_support(alpha);
        self.mu
            .iter()
            .filter(|(face, _)| support.is_subset(**face))
            .map(|(face, c)| self.lee_symbolic(*face, c, alpha))
            .collect()
    }

    fn lee_factors(&self, face: Face, c: &F, alpha: &Monomial) -> FactoredTerm<F> {
        let (coeff, factors) = self.lee_symbolic(face, c, alpha);
        FactoredTerm {
            coeff,
            factors: factors.into_iter().map(|(l, e)| (self.lin(l), e)).collect(),
        }
    }

    fn lee_symbolic(&self, face: Face, c: &F, alpha: &Monomial) -> (F, Vec<(Lin, i32)>) {
        let mut exps: BTreeMap<Lin, i32> = BTreeMap::new();
        for (l, e) in Self::det_factors(face) {
            *exps.entry(l).or_default() -= e;
        }
        let mut sign = 1;
        for i in face.vertices() {
            let e = alpha.exp(i - 1) as i32 - 1;
            if e == 0 {
                continue;
            }
            let (s, factors) = Self::volume_factors(face, i);
            if s < 0 && e % 2 != 0 {
                sign = -sign;
            }
            for (l, x) in factors {
                *exps.entry(l).or_default() += x * e;
            }
        }
        let coeff = if sign < 0 { -c.clone() } else { c.clone() };
        (coeff, exps.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    /// Lee's formula: `Σ_{F ⊇ supp α} deg(x_F) Π_{i ∈ F} [F - i]^{α_i - 1}`.
    pub fn degree_monomial(&self, alpha: &Monomial) -> Result<F> {
        let got = alpha.degree() as usize;
        if got != self.d() {
            return Err(Error::Degree {
                got,
                expected: self.d(),
            });
        }
        if alpha.len() > self.n() {
            return Err(Error::Dimension("monomial uses a vertex without a parameter".into()));
        }
        let support = monomial_support(alpha);
        let mut terms = Vec::new();
        let mut facets = Vec::new();
        for (face, c) in &self.mu {
            if support.is_subset(*face) {
                terms.push(self.lee_factors(*face, c, alpha));
                facets.push(*face);
            }
        }
        F::sum_factored(&terms).ok_or_else(|| Error::DegenerateRho(facets[0]))
    }
}

/// `B*(μ) = A* / L`, where `L` is the kernel of the pairing into the top
/// degree. Each graded piece keeps a squarefree basis, a dual squarefree
/// basis in the complementary degree, and the inverse transposed pairing
/// matrix between them, from which coordinates of any monomial follow.
#[derive(Clone, Debug)]
pub struct GorensteinAlgebra<F> {
    algebra: ArtinianAlgebra<F>,
    df: DegreeFunctional<F>,
    /// `deg` of the basis monomials of `A^d`.
    top: Vec<F>,
    pieces: Vec<GorensteinPiece<F>>,
    memo: RefCell<HashMap<Monomial, Vec<F>>>,
}

#[derive(Clone, Debug)]
struct GorensteinPiece<F> {
    basis: Vec<Face>,
    dual: Vec<Face>,
    /// `(P^T)^{-1}` for `P[a][b] = deg(x_{basis_a} x_{dual_b})`.
    inv_pairing_t: Matrix<F>,
    /// Rows: coordinates in `B^k` of the basis monomials of `A^k`.
    quotient: Matrix<F>,
}

/// A decomposition `u = λ_σ x_σ + Σ λ_α x^α` relative to a face `τ`, with
/// `σ ∪ τ` a facet and every `x^α` supported outside the star of `τ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeDecomposition<F> {
    pub sigma: Face,
    pub lambda: F,
    pub remainder: Vec<(Monomial, F)>,
}

impl<F: Field> GorensteinAlgebra<F> {
    /// Quotients `A` (built to degree `d`) by the kernel of the pairing
    /// defined by `df`.
    pub fn gorensteinify(algebra: ArtinianAlgebra<F>, df: DegreeFunctional<F>) -> Result<Self> {
        let d = df.d();
        if algebra.lsop() != df.lsop() {
            return Err(Error::Config("algebra and degree map use different parameters".into()));
        }
        let top_piece = algebra.piece(d)?;
        let mut top = Vec::with_capacity(top_piece.dim());
        for m in top_piece.basis_monomials() {
            if !m.is_squarefree() {
                return Err(Error::Internal("top-degree basis is not squarefree".into()));
            }
            top.push(df.degree_facet(monomial_support(m))?);
        }
        if top.iter().all(|x| x.is_zero()) {
            return Err(Error::DegenerateCycle);
        }
        let mut ga = GorensteinAlgebra {
            algebra,
            df,
            top,
            pieces: Vec::new(),
            memo: RefCell::new(HashMap::new()),
        };
        for k in 0..=d {
            let piece = ga.build_piece(k)?;
            ga.pieces.push(piece);
        }
        Ok(ga)
    }

    fn build_piece(&self, k: usize) -> Result<GorensteinPiece<F>> {
        let d = self.d();
        let complex = self.algebra.complex();
        let rows = complex.faces_of_size(k);
        let cols = complex.faces_of_size(d - k);
        let pairing: Vec<Vec<F>> = rows
            .iter()
            .map(|s| {
                cols.iter()
                    .map(|t| self.degree_of_monomial(&face_monomial(*s).mul(&face_monomial(*t))))
                    .collect::<Result<Vec<F>>>()
            })
            .collect::<Result<_>>()?;
        let picked = greedy_independent(&pairing, cols.len());
        let basis: Vec<Face> = picked.iter().map(|&i| rows[i]).collect();
        let columns: Vec<Vec<F>> = (0..cols.len())
            .map(|j| picked.iter().map(|&i| pairing[i][j].clone()).collect())
            .collect();
        let dual_idx = greedy_independent(&columns, picked.len());
        let dual: Vec<Face> = dual_idx.iter().map(|&j| cols[j]).collect();
        let p = Matrix::from_fn(basis.len(), dual.len(), |a, b| pairing[picked[a]][dual_idx[b]].clone());
        let inv_pairing_t = p
            .transpose()
            .inverse()
            .ok_or_else(|| Error::Internal("selected pairing block is singular".into()))?;
        let mut piece = GorensteinPiece {
            basis,
            dual,
            inv_pairing_t,
            quotient: Matrix::zeros(0, 0),
        };
        let a_basis: Vec<Monomial> = self.algebra.piece(k)?.basis_monomials().into_iter().cloned().collect();
        let mut q = Vec::with_capacity(a_basis.len());
        for m in &a_basis {
            q.push(self.coords_in(&piece, m)?);
        }
        piece.quotient = Matrix::from_rows(q, piece.basis.len());
        Ok(piece)
    }

    fn coords_in(&self, piece: &GorensteinPiece<F>, m: &Monomial) -> Result<Vec<F>> {
        let w: Vec<F> = piece
            .dual
            .iter()
            .map(|t| self.degree_of_monomial(&m.mul(&face_monomial(*t))))
            .collect::<Result<_>>()?;
        Ok(piece.inv_pairing_t.mul_vec(&w))
    }

    pub fn d(&self) -> usize {
        self.df.d()
    }

    pub fn artinian(&self) -> &ArtinianAlgebra<F> {
        &self.algebra
    }

    pub fn degree_functional(&self) -> &DegreeFunctional<F> {
        &self.df
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.algebra.complex()
    }

    fn piece(&self, k: usize) -> Result<&GorensteinPiece<F>> {
        self.pieces.get(k).ok_or(Error::Range {
            degree: k,
            built: self.d(),
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.basis.len()).collect()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.pieces.get(k).map_or(0, |p| p.basis.len())
    }

    /// Squarefree monomials forming the basis of `B^k`.
    pub fn basis(&self, k: usize) -> Result<&[Face]> {
        Ok(&self.piece(k)?.basis)
    }

    /// `deg` of a degree-`d` monomial through its expansion in `A^d`.
    pub fn degree_of_monomial(&self, m: &Monomial) -> Result<F> {
        let got = m.degree() as usize;
        if got != self.d() {
            return Err(Error::Degree {
                got,
                expected: self.d(),
            });
        }
        Ok(dot(&self.algebra.expand(m)?, &self.top))
    }

    /// `deg` of an element of `A^d` given in its coordinates.
    pub fn degree_element(&self, u: &[F]) -> Result<F> {
        if u.len() != self.top.len() {
            return Err(Error::Dimension("coordinate vector has the wrong length".into()));
        }
        Ok(dot(u, &self.top))
    }

    /// `deg` of an element of `B^d`.
    pub fn degree(&self, u: &[F]) -> Result<F> {
        let p = self.piece(self.d())?;
        if u.len() != p.basis.len() {
            return Err(Error::Dimension("coordinate vector has the wrong length".into()));
        }
        let basis_deg: Vec<F> = p
            .basis
            .iter()
            .map(|f| self.degree_of_monomial(&face_monomial(*f)))
            .collect::<Result<_>>()?;
        Ok(dot(u, &basis_deg))
    }

    /// Coordinates in `B^k` of a monomial of degree `k`.
    pub fn coords(&self, m: &Monomial) -> Result<Vec<F>> {
        if let Some(hit) = self.memo.borrow().get(m) {
            return Ok(hit.clone());
        }
        let piece = self.piece(m.degree() as usize)?;
        let out = self.coords_in(piece, m)?;
        self.memo.borrow_mut().insert(m.clone(), out.clone());
        Ok(out)
    }

    pub fn face_coords(&self, face: Face) -> Result<Vec<F>> {
        self.coords(&face_monomial(face))
    }

    /// Image in `B^k` of an element of `A^k`.
    pub fn quotient(&self, k: usize, a: &[F]) -> Result<Vec<F>> {
        let p = self.piece(k)?;
        if a.len() != p.quotient.rows() {
            return Err(Error::Dimension("coordinate vector has the wrong length".into()));
        }
        Ok(p.quotient.vec_mul(a))
    }

    /// Product of `u ∈ B^j` and `v ∈ B^k`.
    pub fn multiply(&self, j: usize, u: &[F], k: usize, v: &[F]) -> Result<Vec<F>> {
        let target = self.piece(j + k)?;
        let (pj, pk) = (self.piece(j)?, self.piece(k)?);
        if u.len() != pj.basis.len() || v.len() != pk.basis.len() {
            return Err(Error::Dimension("coordinate vector has the wrong length".into()));
        }
        let mut out = vec![F::zero(); target.basis.len()];
        for (a, ua) in pj.basis.iter().zip(u) {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in pk.basis.iter().zip(v) {
                if vb.is_zero() {
                    continue;
                }
                let w = self.coords(&face_monomial(*a).mul(&face_monomial(*b)))?;
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

    /// `u^e` for `u ∈ B^k`.
    pub fn power(&self, k: usize, u: &[F], e: usize) -> Result<Vec<F>> {
        if e == 0 {
            return Ok(vec![F::one()]);
        }
        let mut acc = u.to_vec();
        for i in 1..e {
            acc = self.multiply(k * i, &acc, k, u)?;
        }
        Ok(acc)
    }

    /// Matrix of `deg(b_a · b'_b)` for the bases of `B^k` and `B^{d-k}`.
    pub fn pairing_matrix(&self, k: usize) -> Result<Matrix<F>> {
        let d = self.d();
        if k > d {
            return Err(Error::Range { degree: k, built: d });
        }
        let (left, right) = (&self.piece(k)?.basis, &self.piece(d - k)?.basis);
        let mut m = Matrix::zeros(left.len(), right.len());
        for (a, s) in left.iter().enumerate() {
            for (b, t) in right.iter().enumerate() {
                m.set(a, b, self.degree_of_monomial(&face_monomial(*s).mul(&face_monomial(*t)))?);
            }
        }
        Ok(m)
    }

    /// The pairing on the bases of `A^k` and `A^{d-k}`, before the quotient.
    pub fn artinian_pairing_matrix(&self, k: usize) -> Result<Matrix<F>> {
        let d = self.d();
        if k > d {
            return Err(Error::Range { degree: k, built: d });
        }
        let left: Vec<Monomial> = self.algebra.piece(k)?.basis_monomials().into_iter().cloned().collect();
        let right: Vec<Monomial> = self.algebra.piece(d - k)?.basis_monomials().into_iter().cloned().collect();
        let mut m = Matrix::zeros(left.len(), right.len());
        for (a, s) in left.iter().enumerate() {
            for (b, t) in right.iter().enumerate() {
                m.set(a, b, self.degree_of_monomial(&s.mul(t))?);
            }
        }
        Ok(m)
    }

    /// `L^k`: elements of `A^k` (as coordinates) pairing to zero with `A^{d-k}`.
    pub fn pairing_kernel(&self, k: usize) -> Result<Vec<Vec<F>>> {
        Ok(self.artinian_pairing_matrix(k)?.left_kernel())
    }

    /// Kernel of multiplication by `x_τ` from `B^m` to `B^d`, for `|τ| = d - m`.
    pub fn annihilator(&self, tau: Face, m: usize) -> Result<Vec<Vec<F>>> {
        let d = self.d();
        if tau.len() + m != d {
            return Err(Error::Dimension(format!("face {tau} does not have {} vertices", d.saturating_sub(m))));
        }
        if !self.complex().contains(tau) {
            return Err(Error::MissingFace(tau));
        }
        let xt = face_monomial(tau);
        let row: Vec<F> = self
            .piece(m)?
            .basis
            .iter()
            .map(|s| self.degree_of_monomial(&xt.mul(&face_monomial(*s))))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_rows(vec![row], self.dim(m)).kernel())
    }

    /// Degree-`m` face monomials whose support does not lie in the star of `τ`.
    pub fn outside_star_monomials(&self, tau: Face, m: usize) -> Vec<Monomial> {
        face_monomials(self.complex(), m)
            .into_iter()
            .filter(|a| !self.complex().contains(monomial_support(a).union(tau)))
            .collect()
    }

    /// Coordinates in `B^m` of [`Self::outside_star_monomials`].
    pub fn outside_star_span(&self, tau: Face, m: usize) -> Result<Vec<Vec<F>>> {
        self.outside_star_monomials(tau, m)
            .iter()
            .map(|a| self.coords(a))
            .collect()
    }

    /// Whether the annihilator of `x_τ` in degree `m` equals the span of the
    /// monomials outside the star of `τ`.
    pub fn annihilator_matches(&self, tau: Face, m: usize) -> Result<bool> {
        let ann = self.annihilator(tau, m)?;
        let span = self.outside_star_span(tau, m)?;
        let width = self.dim(m);
        let joint: Vec<Vec<F>> = ann.iter().chain(&span).cloned().collect();
        let r = span_rank(&joint, width);
        Ok(span_rank(&ann, width) == r && span_rank(&span, width) == r)
    }

    /// Splits `u ∈ B^m` relative to `τ` as `λ_σ x_σ` plus monomials supported
    /// outside the star of `τ`.
    pub fn decompose_relative(&self, u: &[F], tau: Face) -> Result<RelativeDecomposition<F>> {
        let d = self.d();
        if tau.len() > d {
            return Err(Error::Dimension(format!("face {tau} has more than {d} vertices")));
        }
        let m = d - tau.len();
        if u.len() != self.dim(m) {
            return Err(Error::Dimension("coordinate vector has the wrong length".into()));
        }
        let link = self.complex().link(tau)?;
        let xt = face_monomial(tau);
        let basis = &self.piece(m)?.basis;
        let mut target = F::zero();
        for (s, c) in basis.iter().zip(u) {
            if !c.is_zero() {
                target = target + c.clone() * self.degree_of_monomial(&xt.mul(&face_monomial(*s)))?;
            }
        }
        if target.is_zero() {
            return Err(Error::NoDualFace);
        }
        for &sigma in link.faces_of_size(m) {
            let pair = self.degree_of_monomial(&xt.mul(&face_monomial(sigma)))?;
            if pair.is_zero() {
                continue;
            }
            let lambda = target.clone() * pair.inverse().expect("nonzero");
            let xs = self.face_coords(sigma)?;
            let rest: Vec<F> = u
                .iter()
                .zip(&xs)
                .map(|(a, b)| a.clone() - lambda.clone() * b.clone())
                .collect();
            let monomials = self.outside_star_monomials(tau, m);
            let mut remainder = Vec::new();
            if rest.iter().any(|x| !x.is_zero()) {
                let cols: Vec<Vec<F>> = monomials.iter().map(|a| self.coords(a)).collect::<Result<_>>()?;
                let sys = Matrix::from_fn(rest.len(), cols.len(), |r, c| cols[c][r].clone());
                let sol = sys.solve(&rest).ok_or_else(|| {
                    Error::Internal(format!("remainder does not lie in the annihilator of x_{tau}"))
                })?;
                remainder = monomials
                    .into_iter()
                    .zip(sol)
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
            }
            return Ok(RelativeDecomposition {
                sigma,
                lambda,
                remainder,
            });
        }
        Err(Error::NoDualFace)
    }
}

/// Coordinates of `x^α` in `A^d` paired with the degree of the basis; the
/// linear-algebra counterpart of Lee's formula.
pub fn linear_degree_table<F: Field>(ga: &GorensteinAlgebra<F>) -> Result<HashMap<Monomial, F>> {
    let mut out = HashMap::new();
    for m in face_monomials(ga.complex(), ga.d()) {
        let v = ga.degree_of_monomial(&m)?;
        out.insert(m, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;
    use crate::reduction::vertex_monomial;
    use crate::scalars::{Fp, Rational};

    type QF = RationalFunction<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn triangle() -> SimplicialCycle<Rational> {
        SimplicialCycle::new(
            2,
            [
                (Face::of(&[1, 2]), q(1)),
                (Face::of(&[2, 3]), q(1)),
                (Face::of(&[1, 3]), q(-1)),
            ],
        )
        .unwrap()
    }

    fn t(i: usize) -> QF {
        QF::var(i - 1)
    }

    #[test]
    fn facet_values() {
        let df = DegreeFunctional::symbolic(&triangle()).unwrap();
        let expected = (&(&t(1) * &t(2)) * &(&t(2) - &t(1))).inverse().unwrap();
        assert_eq!(df.degree_facet(Face::of(&[1, 2])).unwrap(), expected);
        let expected = -(&(&t(1) * &t(3)) * &(&t(3) - &t(1))).inverse().unwrap();
        assert_eq!(df.degree_facet(Face::of(&[1, 3])).unwrap(), expected);
        assert!(df.degree_facet(Face::of(&[1])).is_err());
    }

    #[test]
    fn volume_elements() {
        let df = DegreeFunctional::symbolic(&triangle()).unwrap();
        let r = QF::var(3);
        let f = Face::of(&[1, 2]);
        assert_eq!(df.volume_element(f, 1).unwrap(), &(&r * &t(2)) * &(&t(2) - &r));
        assert_eq!(df.volume_element(f, 2).unwrap(), &(&r * &t(1)) * &(&r - &t(1)));
        assert_eq!(
            df.volume_element(f, 3),
            Err(Error::MissingVertex { vertex: 3, face: f })
        );
    }

    #[test]
    fn volume_element_matches_determinant() {
        let k = generators::simplex_boundary(3);
        let mu = SimplicialCycle::<Rational>::fundamental(&k).unwrap();
        let df = DegreeFunctional::symbolic(&mu).unwrap();
        let r = QF::var(4);
        for &f in k.faces_of_size(3) {
            for i in f.vertices() {
                let m = Matrix::from_fn(3, 3, |row, col| {
                    let v = f.to_vec()[col];
                    let x = if v == i { r.clone() } else { t(v) };
                    x.pow(row as u64 + 1)
                });
                assert_eq!(df.volume_element(f, i).unwrap(), m.det());
            }
        }
    }

    #[test]
    fn lee_square_on_triangle() {
        let df = DegreeFunctional::symbolic(&triangle()).unwrap();
        let value = df.degree_monomial(&vertex_monomial(&[(1, 2)])).unwrap();
        let den = &(&(&t(1) * &t(1)) * &(&t(2) - &t(1))) * &(&t(3) - &t(1));
        let expected = -(&(&t(3) - &t(2)) * &den.inverse().unwrap());
        assert_eq!(value, expected);
        assert!(!value.mentions(3));
        assert_eq!(
            df.degree_monomial(&vertex_monomial(&[(1, 1)])),
            Err(Error::Degree { got: 1, expected: 2 })
        );
    }

    #[test]
    fn triangle_gorenstein() {
        let mu = triangle();
        let df = DegreeFunctional::symbolic(&mu).unwrap();
        let a = ArtinianAlgebra::build(&mu.support(), df.lsop(), 2).unwrap();
        let ga = GorensteinAlgebra::gorensteinify(a, df.clone()).unwrap();
        assert_eq!(ga.dims(), vec![1, 1, 1]);
        for m in face_monomials(ga.complex(), 2) {
            assert_eq!(ga.degree_of_monomial(&m).unwrap(), df.degree_monomial(&m).unwrap());
        }
        // x_1 x_2 + x_2 x_3 in A^2
        let a2 = ga.artinian().piece(2).unwrap();
        let u: Vec<QF> = a2
            .expand(&vertex_monomial(&[(1, 1), (2, 1)]))
            .into_iter()
            .zip(a2.expand(&vertex_monomial(&[(2, 1), (3, 1)])))
            .map(|(x, y)| x + y)
            .collect();
        let expected = df.degree_facet(Face::of(&[1, 2])).unwrap() + df.degree_facet(Face::of(&[2, 3])).unwrap();
        assert_eq!(ga.degree_element(&u).unwrap(), expected);
    }

    #[test]
    fn pinched_cycle_has_strict_quotient() {
        use rand::SeedableRng;
        type G = crate::scalars::Gf<2>;
        let mu = generators::pinched_triangles::<Fp<2>>();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let lsop = MomentCurveLsop::with_params(2, (0..5).map(|_| G::random(&mut rng)).collect()).unwrap();
        let df = DegreeFunctional::new(&mu, lsop.clone(), G::random(&mut rng)).unwrap();
        let a = ArtinianAlgebra::build(&mu.support(), &lsop, 2).unwrap();
        let dims_a = a.dims();
        let ga = GorensteinAlgebra::gorensteinify(a, df).unwrap();
        assert_eq!(ga.dims()[2], 1);
        assert!(ga.dims()[1] < dims_a[1]);
    }
}
