//! Simplicity testing, composition series, isomorphism testing and
//! Krull-Schmidt decomposition.
//!
//! The randomized parts follow the Holt-Rees form of Norton's irreducibility
//! test: random elements of the enveloping algebra are sampled, their
//! characteristic polynomials factored, and nullspace vectors spun. Every
//! answer is certified, so a seed only changes running time. After
//! [`MAX_ATTEMPTS`] unsuccessful samples an operation gives up with
//! [`MeatAxeError::Inconclusive`] rather than guess.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::finite_field::{Elem, FiniteField};
use crate::linalg::{act_on_quotient, act_on_subspace, spin, EchelonSpace, Matrix};
use crate::modrep::{end_space, hom_space, regular_module, ModError, Rep};
use crate::perm_group::PermGroup;
use crate::poly::{char_poly, factor, Poly};

pub const MAX_ATTEMPTS: usize = 200;

/// Above this many elements a Hom space is sampled instead of scanned.
pub const SCAN_CAP: u64 = 4096;

const POOL_SIZE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeatAxeError {
    #[error(transparent)]
    Module(#[from] ModError),
    #[error("the module is zero-dimensional")]
    ZeroDimension,
    #[error("no decision after {0} random attempts")]
    Inconclusive(usize),
    #[error("the module is decomposable; decompose it first")]
    Decomposable,
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_elem<R: Rng>(f: &FiniteField, rng: &mut R) -> Elem {
    rng.gen_range(0..f.order())
}

/// Random elements of the algebra generated by a list of matrices: a pool
/// of words grows by products and samples are random linear combinations.
struct AlgebraSampler<'a> {
    f: &'a FiniteField,
    pool: Vec<Matrix>,
}

impl<'a> AlgebraSampler<'a> {
    fn new(f: &'a FiniteField, gens: &[Matrix], dim: usize) -> Self {
        let mut pool = vec![Matrix::identity(dim)];
        pool.extend(gens.iter().cloned());
        AlgebraSampler { f, pool }
    }

    fn sample<R: Rng>(&mut self, rng: &mut R) -> Matrix {
        let n = self.pool.len();
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let product = self.pool[i].mul(self.f, &self.pool[j]);
        if n < POOL_SIZE {
            self.pool.push(product);
        } else {
            // slot 0 keeps the identity
            let k = rng.gen_range(1..n);
            self.pool[k] = product;
        }
        let dim = self.pool[0].rows();
        let mut a = Matrix::zeros(dim, dim);
        for m in &self.pool {
            let c = random_elem(self.f, rng);
            if c != 0 {
                a.add_scaled(self.f, c, m);
            }
        }
        a
    }
}

enum Split {
    Simple { factor_degree: usize, attempts: usize },
    Reducible(EchelonSpace),
}

/// Either a proper nonzero invariant subspace or a Norton certificate.
fn split<R: Rng>(f: &FiniteField, gens: &[Matrix], dim: usize, rng: &mut R) -> Result<Split, MeatAxeError> {
    if dim == 0 {
        return Err(MeatAxeError::ZeroDimension);
    }
    if dim == 1 {
        return Ok(Split::Simple {
            factor_degree: 1,
            attempts: 0,
        });
    }
    let transposes: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
    let mut sampler = AlgebraSampler::new(f, gens, dim);
    for attempt in 1..=MAX_ATTEMPTS {
        let a = sampler.sample(rng);
        for (g, _) in factor(f, &char_poly(f, &a), rng) {
            let ga = g.eval_matrix(f, &a);
            let null = ga.left_kernel(f);
            let s = spin(f, &[null.row(0).to_vec()], gens);
            if !s.is_full() {
                return Ok(Split::Reducible(s));
            }
            if null.rows() == g.degree() {
                let null_t = ga.transpose().left_kernel(f);
                let st = spin(f, &[null_t.row(0).to_vec()], &transposes);
                if !st.is_full() {
                    let annihilator = st.to_matrix().transpose().left_kernel(f);
                    return Ok(Split::Reducible(EchelonSpace::from_matrix(f, &annihilator)));
                }
                return Ok(Split::Simple {
                    factor_degree: g.degree(),
                    attempts: attempt,
                });
            }
        }
    }
    Err(MeatAxeError::Inconclusive(MAX_ATTEMPTS))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicityCertificate {
    OneDimensional,
    /// A sampled algebra element whose irreducible factor of this degree has
    /// a nullspace of the same dimension, spinning up the whole module both
    /// for the module and its dual.
    Norton {
        factor_degree: usize,
        attempts: usize,
    },
    /// Rows spanning a proper nonzero submodule.
    Submodule(Matrix),
}

#[derive(Clone, Debug)]
pub struct SimplicityVerdict {
    pub simple: bool,
    pub certificate: SimplicityCertificate,
}

pub fn is_simple(v: &Rep, seed: u64) -> Result<SimplicityVerdict, MeatAxeError> {
    let mut rng = seeded_rng(seed);
    let f = &**v.field();
    Ok(match split(f, v.generators(), v.dim(), &mut rng)? {
        Split::Simple { .. } if v.dim() == 1 => SimplicityVerdict {
            simple: true,
            certificate: SimplicityCertificate::OneDimensional,
        },
        Split::Simple {
            factor_degree,
            attempts,
        } => SimplicityVerdict {
            simple: true,
            certificate: SimplicityCertificate::Norton {
                factor_degree,
                attempts,
            },
        },
        Split::Reducible(s) => SimplicityVerdict {
            simple: false,
            certificate: SimplicityCertificate::Submodule(s.to_matrix()),
        },
    })
}

/// Diagonal blocks of a block triangular form: (dimension, generator blocks).
type Blocks = Vec<(usize, Vec<Matrix>)>;

/// Basis rows (submodule first) and the diagonal blocks of the resulting
/// block lower triangular form.
fn chop<R: Rng>(f: &FiniteField, gens: &[Matrix], dim: usize, rng: &mut R) -> Result<(Matrix, Blocks), MeatAxeError> {
    if dim == 0 {
        return Ok((Matrix::zeros(0, 0), Vec::new()));
    }
    match split(f, gens, dim, rng)? {
        Split::Simple { .. } => Ok((Matrix::identity(dim), vec![(dim, gens.to_vec())])),
        Split::Reducible(s) => {
            let sub = act_on_subspace(f, gens, &s);
            let quo = act_on_quotient(f, gens, &s);
            let (b1, mut f1) = chop(f, &sub, s.len(), rng)?;
            let (b2, f2) = chop(f, &quo, dim - s.len(), rng)?;
            let top = b1.mul(f, &s.to_matrix());
            let bottom = b2.mul(f, &s.complement());
            f1.extend(f2);
            Ok((Matrix::stack(dim, &[&top, &bottom]), f1))
        }
    }
}

/// A basis in which every generator is block lower triangular, with the
/// diagonal blocks as composition factors (bottom factor first).
#[derive(Clone, Debug)]
pub struct CompositionSeries {
    pub basis: Matrix,
    pub factors: Vec<Rep>,
}

pub fn composition_series(v: &Rep, seed: u64) -> Result<CompositionSeries, MeatAxeError> {
    let mut rng = seeded_rng(seed);
    let f = &**v.field();
    let (basis, blocks) = chop(f, v.generators(), v.dim(), &mut rng)?;
    let factors = blocks
        .into_iter()
        .map(|(d, gens)| Rep::from_parts(v.group().clone(), v.field().clone(), d, gens))
        .collect();
    Ok(CompositionSeries { basis, factors })
}

pub fn composition_factors(v: &Rep, seed: u64) -> Result<Vec<Rep>, MeatAxeError> {
    Ok(composition_series(v, seed)?.factors)
}

// ---------------------------------------------------------------------------
// Endomorphism rings

/// `End(V)` together with its Jacobson radical.
#[derive(Clone, Debug)]
pub struct EndStructure {
    pub basis: Vec<Matrix>,
    pub radical: Vec<Matrix>,
    /// Dimensions of the composition factors of `V` as an `End(V)`-module.
    pub factor_dims: Vec<usize>,
}

impl EndStructure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim End / rad End`.
    pub fn top_dim(&self) -> usize {
        self.basis.len() - self.radical.len()
    }

    /// A semisimple quotient all of whose simple modules have its full
    /// dimension is a division ring.
    pub fn is_local(&self) -> bool {
        self.factor_dims.iter().all(|&d| d == self.top_dim())
    }
}

fn end_structure_with<R: Rng>(v: &Rep, rng: &mut R) -> Result<EndStructure, MeatAxeError> {
    if v.dim() == 0 {
        return Err(MeatAxeError::ZeroDimension);
    }
    let f = &**v.field();
    let basis = end_space(v).basis;
    if basis.len() == 1 {
        return Ok(EndStructure {
            basis,
            radical: Vec::new(),
            factor_dims: vec![1; v.dim()],
        });
    }
    // V is a faithful End(V)-module; the radical is exactly what acts as
    // zero on every composition factor.
    let (b, blocks) = chop(f, &basis, v.dim(), rng)?;
    let b_inv = b.inverse(f).expect("composition basis is invertible");
    let rows: Vec<Vec<Elem>> = basis
        .iter()
        .map(|e| {
            let t = e.conjugate_by(f, &b, &b_inv);
            let mut diag = Vec::new();
            let mut start = 0;
            for (d, _) in &blocks {
                for i in start..start + d {
                    diag.extend_from_slice(&t.row(i)[start..start + d]);
                }
                start += d;
            }
            diag
        })
        .collect();
    let width = rows[0].len();
    let kernel = Matrix::from_rows(width, &rows).left_kernel(f);
    let radical = (0..kernel.rows()).map(|r| combine(f, &basis, kernel.row(r))).collect();
    Ok(EndStructure {
        basis,
        radical,
        factor_dims: blocks.iter().map(|(d, _)| *d).collect(),
    })
}

pub fn end_structure(v: &Rep) -> Result<EndStructure, MeatAxeError> {
    end_structure_with(v, &mut seeded_rng(0))
}

fn combine(f: &FiniteField, basis: &[Matrix], coeffs: &[Elem]) -> Matrix {
    let mut m = Matrix::zeros(basis[0].rows(), basis[0].cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            m.add_scaled(f, c, b);
        }
    }
    m
}

pub fn is_indecomposable(v: &Rep) -> Result<bool, MeatAxeError> {
    Ok(end_structure(v)?.is_local())
}

pub fn is_absolutely_simple(v: &Rep) -> Result<bool, MeatAxeError> {
    Ok(is_simple(v, 0)?.simple && end_space(v).dim() == 1)
}

pub fn is_absolutely_indecomposable(v: &Rep) -> Result<bool, MeatAxeError> {
    let end = end_structure(v)?;
    Ok(end.is_local() && end.top_dim() == 1)
}

// ---------------------------------------------------------------------------
// Isomorphism and summands

fn generator_char_polys(v: &Rep) -> Vec<Poly> {
    let f = &**v.field();
    v.generators().iter().map(|m| char_poly(f, m)).collect()
}

/// For `v` indecomposable: whether `v` is isomorphic to a direct summand
/// of `m`. Since `End(v)` is local, `v | m` iff some composite
/// `v -> m -> v` of basis homomorphisms is invertible.
pub fn is_component(v: &Rep, m: &Rep) -> Result<bool, MeatAxeError> {
    Ok(summand_embedding(v, m)?.is_some())
}

/// A split injection `v -> m` when `v` (indecomposable) is a summand of `m`.
fn summand_embedding(v: &Rep, m: &Rep) -> Result<Option<Matrix>, MeatAxeError> {
    if v.dim() == 0 {
        return Err(MeatAxeError::ZeroDimension);
    }
    if v.dim() > m.dim() {
        v.same_group_and_field(m)?;
        return Ok(None);
    }
    let f = &**v.field();
    let into = hom_space(v, m)?;
    if into.dim() == 0 {
        return Ok(None);
    }
    let back = hom_space(m, v)?;
    for a in &into.basis {
        for b in &back.basis {
            if a.mul(f, b).is_invertible(f) {
                return Ok(Some(a.clone()));
            }
        }
    }
    Ok(None)
}

/// An isomorphism `v -> u` for `v` indecomposable.
pub fn indecomposable_isomorphism(v: &Rep, u: &Rep) -> Result<Option<Matrix>, MeatAxeError> {
    v.same_group_and_field(u)?;
    if v.dim() != u.dim() || generator_char_polys(v) != generator_char_polys(u) {
        return Ok(None);
    }
    summand_embedding(v, u)
}

/// An invertible intertwiner `v -> u`, if one exists.
pub fn isomorphism(v: &Rep, u: &Rep) -> Result<Option<Matrix>, MeatAxeError> {
    v.same_group_and_field(u)?;
    if v.dim() != u.dim() {
        return Ok(None);
    }
    if v.dim() == 0 {
        return Ok(Some(Matrix::zeros(0, 0)));
    }
    if generator_char_polys(v) != generator_char_polys(u) {
        return Ok(None);
    }
    let f = &**v.field();
    let hom = hom_space(v, u)?;
    if hom.dim() == 0 {
        return Ok(None);
    }
    if let Some(m) = hom.basis.iter().find(|m| m.is_invertible(f)) {
        return Ok(Some(m.clone()));
    }
    let q = f.order() as u64;
    let h = hom.dim() as u32;
    if q.checked_pow(h).is_some_and(|n| n <= SCAN_CAP) {
        let total = q.pow(h);
        for t in 1..total {
            let mut coeffs = Vec::with_capacity(h as usize);
            let mut r = t;
            for _ in 0..h {
                coeffs.push((r % q) as Elem);
                r /= q;
            }
            let m = combine(f, &hom.basis, &coeffs);
            if m.is_invertible(f) {
                return Ok(Some(m));
            }
        }
        return Ok(None);
    }
    let mut rng = seeded_rng(0);
    for _ in 0..64 {
        let coeffs: Vec<Elem> = (0..h).map(|_| random_elem(f, &mut rng)).collect();
        let m = combine(f, &hom.basis, &coeffs);
        if m.is_invertible(f) {
            return Ok(Some(m));
        }
    }
    // Decide through Krull-Schmidt: equal summand multisets give an
    // isomorphism assembled blockwise.
    let dv = decompose(v, 0)?;
    let du = decompose(u, 0)?;
    let Some(matching) = match_types(&dv, &du)? else {
        return Ok(None);
    };
    let mut blocks = Vec::new();
    for ((_, mult), (_, iso)) in dv.summands.iter().zip(&matching) {
        for _ in 0..*mult {
            blocks.push(iso.clone());
        }
    }
    // reorder the target basis to follow the source's type order
    let offsets = du.type_offsets();
    let mut target_rows = Vec::new();
    for (j, _) in &matching {
        let (start, len) = offsets[*j];
        target_rows.push(du.basis_change.submatrix(start, start + len, 0, u.dim()));
    }
    let target_refs: Vec<&Matrix> = target_rows.iter().collect();
    let target = Matrix::stack(u.dim(), &target_refs);
    let block_refs: Vec<&Matrix> = blocks.iter().collect();
    let x = Matrix::block_diag(&block_refs);
    let source_inv = dv.basis_change.inverse(f).expect("basis change is invertible");
    Ok(Some(source_inv.mul(f, &x).mul(f, &target)))
}

pub fn is_isomorphic(v: &Rep, u: &Rep) -> Result<bool, MeatAxeError> {
    Ok(isomorphism(v, u)?.is_some())
}

// ---------------------------------------------------------------------------
// Krull-Schmidt

/// `V` conjugated by `basis_change` is block diagonal: the copies of the
/// first summand type, then the second, and so on, each block equal to the
/// representative's matrices.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<(Rep, usize)>,
    pub basis_change: Matrix,
}

impl Decomposition {
    /// Every component with repetition, in block order.
    pub fn components(&self) -> Vec<&Rep> {
        self.summands
            .iter()
            .flat_map(|(r, m)| std::iter::repeat_n(r, *m))
            .collect()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.components().iter().map(|r| r.dim()).collect()
    }

    /// (first row, number of rows) of each summand type in `basis_change`.
    fn type_offsets(&self) -> Vec<(usize, usize)> {
        let mut start = 0;
        self.summands
            .iter()
            .map(|(r, m)| {
                let len = r.dim() * m;
                let out = (start, len);
                start += len;
                out
            })
            .collect()
    }
}

/// For each type of `a`, the matching type of `b` and an isomorphism
/// between their representatives; `None` if the multisets differ.
fn match_types(a: &Decomposition, b: &Decomposition) -> Result<Option<Vec<(usize, Matrix)>>, MeatAxeError> {
    if a.summands.len() != b.summands.len() {
        return Ok(None);
    }
    let mut used = vec![false; b.summands.len()];
    let mut out = Vec::new();
    for (ra, ma) in &a.summands {
        let mut found = None;
        for (j, (rb, mb)) in b.summands.iter().enumerate() {
            if used[j] || ma != mb {
                continue;
            }
            if let Some(iso) = indecomposable_isomorphism(ra, rb)? {
                found = Some((j, iso));
                break;
            }
        }
        match found {
            Some((j, iso)) => {
                used[j] = true;
                out.push((j, iso));
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Whether two decompositions have the same multiset of summand types.
pub fn same_summand_types(a: &Decomposition, b: &Decomposition) -> Result<bool, MeatAxeError> {
    Ok(match_types(a, b)?.is_some())
}

/// Isomorphism invariants used to order summand types: dimension,
/// endomorphism dimension, then characteristic polynomials of all group
/// elements.
fn type_key(v: &Rep) -> (usize, usize, Vec<Poly>) {
    let f = &**v.field();
    let polys = v.all_element_matrices().iter().map(|m| char_poly(f, m)).collect();
    (v.dim(), end_space(v).dim(), polys)
}

fn split_indecomposables<R: Rng>(
    v: &Rep,
    rows: Matrix,
    rng: &mut R,
    out: &mut Vec<(Matrix, Rep)>,
) -> Result<(), MeatAxeError> {
    let f = &**v.field();
    let end = end_structure_with(v, rng)?;
    if end.is_local() {
        out.push((rows, v.clone()));
        return Ok(());
    }
    // Fitting: generalized eigenspaces of an endomorphism are submodules.
    for _ in 0..MAX_ATTEMPTS {
        let coeffs: Vec<Elem> = (0..end.dim()).map(|_| random_elem(f, rng)).collect();
        let a = combine(f, &end.basis, &coeffs);
        let factors = factor(f, &char_poly(f, &a), rng);
        if factors.len() < 2 {
            continue;
        }
        for (g, e) in factors {
            let mut ge = Poly::one();
            for _ in 0..e {
                ge = ge.mul(f, &g);
            }
            let kernel = ge.eval_matrix(f, &a).left_kernel(f);
            let space = EchelonSpace::from_matrix(f, &kernel);
            let sub = v.submodule(&space);
            let sub_rows = space.to_matrix().mul(f, &rows);
            split_indecomposables(&sub, sub_rows, rng, out)?;
        }
        return Ok(());
    }
    Err(MeatAxeError::Inconclusive(MAX_ATTEMPTS))
}

pub fn decompose(v: &Rep, seed: u64) -> Result<Decomposition, MeatAxeError> {
    let f = &**v.field();
    if v.dim() == 0 {
        return Ok(Decomposition {
            summands: Vec::new(),
            basis_change: Matrix::zeros(0, 0),
        });
    }
    let mut rng = seeded_rng(seed);
    let mut leaves = Vec::new();
    split_indecomposables(v, Matrix::identity(v.dim()), &mut rng, &mut leaves)?;

    struct Type {
        rep: Rep,
        copies: Vec<Matrix>,
    }
    let mut types: Vec<Type> = Vec::new();
    'leaves: for (rows, leaf) in leaves {
        for t in types.iter_mut() {
            if let Some(m) = indecomposable_isomorphism(&leaf, &t.rep)? {
                // rows' = m^-1 rows carries the representative's matrices exactly
                let m_inv = m.inverse(f).expect("isomorphism is invertible");
                t.copies.push(m_inv.mul(f, &rows));
                continue 'leaves;
            }
        }
        types.push(Type {
            rep: leaf,
            copies: vec![rows],
        });
    }
    let mut keyed: Vec<_> = types.into_iter().map(|t| (type_key(&t.rep), t)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut all_rows = Vec::new();
    let mut summands = Vec::new();
    for (_, t) in keyed {
        summands.push((t.rep, t.copies.len()));
        all_rows.extend(t.copies);
    }
    let refs: Vec<&Matrix> = all_rows.iter().collect();
    Ok(Decomposition {
        summands,
        basis_change: Matrix::stack(v.dim(), &refs),
    })
}

// ---------------------------------------------------------------------------
// Simple modules

/// Representatives of the simple modules, in canonical order.
#[derive(Clone, Debug)]
pub struct SimpleSet {
    pub group: Arc<PermGroup>,
    pub field: Arc<FiniteField>,
    pub modules: Vec<Rep>,
    pub end_degrees: Vec<usize>,
}

impl SimpleSet {
    /// Index of the member isomorphic to a simple module `w`.
    pub fn position(&self, w: &Rep) -> Result<Option<usize>, MeatAxeError> {
        for (i, s) in self.modules.iter().enumerate() {
            if simple_isomorphic(s, w)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// For simple modules a nonzero homomorphism is an isomorphism.
fn simple_isomorphic(a: &Rep, b: &Rep) -> Result<bool, MeatAxeError> {
    a.same_group_and_field(b)?;
    Ok(a.dim() == b.dim() && hom_space(a, b)?.dim() > 0)
}

/// Composition factors of the regular module, one per isomorphism type.
pub fn simple_modules(group: &Arc<PermGroup>, field: &Arc<FiniteField>, seed: u64) -> Result<SimpleSet, MeatAxeError> {
    let reg = regular_module(group, field);
    let mut found: Vec<Rep> = Vec::new();
    for w in composition_factors(&reg, seed)? {
        let mut new = true;
        for s in &found {
            if simple_isomorphic(s, &w)? {
                new = false;
                break;
            }
        }
        if new {
            found.push(w);
        }
    }
    let mut keyed: Vec<_> = found.into_iter().map(|w| (type_key(&w), w)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(SimpleSet {
        group: group.clone(),
        field: field.clone(),
        end_degrees: keyed.iter().map(|(k, _)| k.1).collect(),
        modules: keyed.into_iter().map(|(_, w)| w).collect(),
    })
}
