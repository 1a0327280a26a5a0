//! KG-modules as matrix representations and the functors between them.
//!
//! A [`Rep`] stores one matrix per group generator. Vectors are rows and the
//! group acts on the right, so `rho(gh) = rho(g) rho(h)`. Images of arbitrary
//! elements are products along the generator words recorded by the group.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{embed, make_field, Elem, FieldAutomorphism, FieldDoc, FieldError, FiniteField};
use crate::linalg::{act_on_quotient, act_on_subspace, EchelonSpace, Matrix};
use crate::perm_group::{coset_table, GroupDoc, GroupError, PermGroup, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("modules are over different groups")]
    GroupMismatch,
    #[error("modules are over different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("expected {expected} generator matrices, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("matrix {index} has shape {rows}x{cols}, expected {dim}x{dim}")]
    BadShape {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("matrix for generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("matrices violate the group multiplication at element {0}")]
    RelationViolated(usize),
    #[error("subgroup does not belong to the module's group")]
    SubgroupMismatch,
    #[error("malformed module document: {0}")]
    Malformed(String),
}

#[derive(Clone)]
pub struct Rep {
    group: Arc<PermGroup>,
    field: Arc<FiniteField>,
    dim: usize,
    gens: Vec<Matrix>,
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Rep(dim {} over {}, group of order {})",
            self.dim,
            self.field,
            self.group.order()
        )
    }
}

impl Rep {
    /// Checks shapes, invertibility and every group relation. The dimension
    /// is read off the first matrix.
    pub fn new(group: Arc<PermGroup>, field: Arc<FiniteField>, gens: Vec<Matrix>) -> Result<Self, ModError> {
        let dim = gens.first().map_or(0, Matrix::rows);
        Self::with_dim(group, field, dim, gens)
    }

    /// Like [`Rep::new`] with the dimension given, which matters only for a
    /// group presented without generators.
    pub fn with_dim(
        group: Arc<PermGroup>,
        field: Arc<FiniteField>,
        dim: usize,
        gens: Vec<Matrix>,
    ) -> Result<Self, ModError> {
        let expected = group.generators().len();
        if gens.len() != expected {
            return Err(ModError::GeneratorCount {
                expected,
                got: gens.len(),
            });
        }
        for (index, m) in gens.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(ModError::BadShape {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim,
                });
            }
            if !m.is_invertible(&field) {
                return Err(ModError::NotInvertible(index));
            }
        }
        let rep = Rep {
            group,
            field,
            dim,
            gens,
        };
        rep.check_relations()?;
        Ok(rep)
    }

    /// Zero-dimensional modules have no generator matrices to infer the
    /// dimension from, so the dimension is passed explicitly here.
    pub(crate) fn from_parts(group: Arc<PermGroup>, field: Arc<FiniteField>, dim: usize, gens: Vec<Matrix>) -> Self {
        debug_assert_eq!(gens.len(), group.generators().len());
        Rep {
            group,
            field,
            dim,
            gens,
        }
    }

    /// `rho(x) rho(s) = rho(x s)` for every element `x` and generator `s`
    /// pins down a homomorphism, since `rho` is defined along words.
    fn check_relations(&self) -> Result<(), ModError> {
        let all = self.all_element_matrices();
        for x in 0..self.group.order() {
            for (s, m) in self.gens.iter().enumerate() {
                let y = self.group.mul(x, self.group.generator_index(s));
                if all[x].mul(&self.field, m) != all[y] {
                    return Err(ModError::RelationViolated(y));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn element_matrix(&self, a: usize) -> Matrix {
        let mut m = Matrix::identity(self.dim);
        for s in self.group.word(a) {
            m = m.mul(&self.field, &self.gens[s]);
        }
        m
    }

    /// Images of every group element, indexed like `group().elements()`.
    pub fn all_element_matrices(&self) -> Vec<Matrix> {
        let mut out = vec![Matrix::zeros(0, 0); self.group.order()];
        for &a in self.group.bfs_order() {
            out[a] = match self.group.word_step(a) {
                None => Matrix::identity(self.dim),
                Some((p, s)) => out[p].mul(&self.field, &self.gens[s]),
            };
        }
        out
    }

    pub(crate) fn same_group_and_field(&self, other: &Rep) -> Result<(), ModError> {
        if *self.group != *other.group {
            return Err(ModError::GroupMismatch);
        }
        if *self.field != *other.field {
            return Err(ModError::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    /// The module spanned by an invariant subspace, in the basis of its echelon rows.
    pub fn submodule(&self, space: &EchelonSpace) -> Rep {
        let gens = act_on_subspace(&self.field, &self.gens, space);
        Rep::from_parts(self.group.clone(), self.field.clone(), space.len(), gens)
    }

    /// The quotient by an invariant subspace, in the basis of unit vectors at
    /// the non-pivot columns.
    pub fn quotient(&self, space: &EchelonSpace) -> Rep {
        let gens = act_on_quotient(&self.field, &self.gens, space);
        Rep::from_parts(self.group.clone(), self.field.clone(), self.dim - space.len(), gens)
    }

    /// The same module in the basis given by the rows of `basis`.
    pub fn change_basis(&self, basis: &Matrix) -> Rep {
        let f = &self.field;
        let inv = basis.inverse(f).expect("basis change must be invertible");
        let gens = self.gens.iter().map(|a| a.conjugate_by(f, basis, &inv)).collect();
        Rep::from_parts(self.group.clone(), self.field.clone(), self.dim, gens)
    }

    /// Whether `m` (dim x other.dim) intertwines `self` and `other`.
    pub fn is_hom_to(&self, other: &Rep, m: &Matrix) -> bool {
        let f = &self.field;
        m.rows() == self.dim
            && m.cols() == other.dim
            && self
                .gens
                .iter()
                .zip(&other.gens)
                .all(|(a, b)| a.mul(f, m) == m.mul(f, b))
    }

    pub fn to_doc(&self) -> ModuleDoc {
        let f = &self.field;
        ModuleDoc {
            schema_version: MODULE_SCHEMA_VERSION,
            group: self.group.to_doc(),
            field: f.to_doc(),
            dim: self.dim,
            matrices: self
                .gens
                .iter()
                .map(|m| {
                    (0..m.rows())
                        .map(|i| m.row(i).iter().map(|&x| f.coeffs(x)).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

pub const MODULE_SCHEMA_VERSION: u32 = 1;

/// Serialized module: group, field, dimension and one row-major matrix per
/// generator with entries as coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub schema_version: u32,
    pub group: GroupDoc,
    pub field: FieldDoc,
    pub dim: usize,
    pub matrices: Vec<Vec<Vec<Vec<u32>>>>,
}

impl ModuleDoc {
    pub fn build(&self) -> Result<Rep, ModError> {
        let group = self.group.build()?;
        self.build_over(group)
    }

    /// Builds the module over an already constructed group with the same generators.
    pub fn build_over(&self, group: Arc<PermGroup>) -> Result<Rep, ModError> {
        if self.schema_version != MODULE_SCHEMA_VERSION {
            return Err(ModError::Malformed(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        if group.to_doc() != self.group {
            return Err(ModError::GroupMismatch);
        }
        let field = self.field.resolve()?;
        let mut gens = Vec::new();
        for (index, m) in self.matrices.iter().enumerate() {
            let mut data = Vec::with_capacity(self.dim * self.dim);
            if m.len() != self.dim || m.iter().any(|r| r.len() != self.dim) {
                return Err(ModError::BadShape {
                    index,
                    rows: m.len(),
                    cols: m.first().map_or(0, Vec::len),
                    dim: self.dim,
                });
            }
            for row in m {
                for e in row {
                    data.push(field.from_coeffs(e)?);
                }
            }
            gens.push(Matrix::from_vec(self.dim, self.dim, data));
        }
        Rep::with_dim(group, field, self.dim, gens)
    }
}

// ---------------------------------------------------------------------------
// Constructions

pub fn trivial_module(group: &Arc<PermGroup>, field: &Arc<FiniteField>) -> Rep {
    let gens = vec![Matrix::identity(1); group.generators().len()];
    Rep::from_parts(group.clone(), field.clone(), 1, gens)
}

pub fn zero_module(group: &Arc<PermGroup>, field: &Arc<FiniteField>) -> Rep {
    let gens = vec![Matrix::zeros(0, 0); group.generators().len()];
    Rep::from_parts(group.clone(), field.clone(), 0, gens)
}

/// Right multiplication on the element list: `e_x -> e_{x g}`.
pub fn regular_module(group: &Arc<PermGroup>, field: &Arc<FiniteField>) -> Rep {
    let n = group.order();
    let gens = (0..group.generators().len())
        .map(|s| {
            let g = group.generator_index(s);
            let mut m = Matrix::zeros(n, n);
            for x in 0..n {
                m.set(x, group.mul(x, g), 1);
            }
            m
        })
        .collect();
    Rep::from_parts(group.clone(), field.clone(), n, gens)
}

/// The permutation module on the moved points: `e_i -> e_{i^g}`.
pub fn permutation_module(group: &Arc<PermGroup>, field: &Arc<FiniteField>) -> Rep {
    let n = group.degree();
    let gens = group
        .generators()
        .iter()
        .map(|g| {
            let mut m = Matrix::zeros(n, n);
            for (i, &j) in g.images().iter().enumerate() {
                m.set(i, j as usize, 1);
            }
            m
        })
        .collect();
    Rep::from_parts(group.clone(), field.clone(), n, gens)
}

/// `V (x)_K L`: entries mapped through the canonical embedding.
pub fn extend_scalars(v: &Rep, target: &Arc<FiniteField>) -> Result<Rep, ModError> {
    let e = embed(&v.field, target)?;
    let gens = v.gens.iter().map(|m| m.map(|x| e.apply(x))).collect();
    Ok(Rep::from_parts(v.group.clone(), target.clone(), v.dim, gens))
}

/// Coordinates of elements of `large` over `small`, in the basis
/// `1, x, ..., x^(r-1)` of powers of the generator of `large`.
pub(crate) struct RelativeBasis {
    small: Arc<FiniteField>,
    large: Arc<FiniteField>,
    r: usize,
    // inverse of the GF(p)-coordinate matrix of {e(p^j) x^i}
    inverse: Matrix,
}

impl RelativeBasis {
    pub(crate) fn new(small: &Arc<FiniteField>, large: &Arc<FiniteField>) -> Result<Self, ModError> {
        let e = embed(small, large)?;
        let p = large.characteristic();
        let prime = make_field(p, 1)?;
        let m = small.degree() as usize;
        let n = large.degree() as usize;
        let r = n / m;
        let x = large.generator();
        let mut rows = Vec::with_capacity(n);
        for i in 0..r {
            let xi = large.pow(x, i as u64);
            for j in 0..m {
                let unit = small.from_coeffs(&unit_digits(m, j))?;
                rows.push(large.coeffs(large.mul(e.apply(unit), xi)));
            }
        }
        let inverse = Matrix::from_rows(n, &rows)
            .inverse(&prime)
            .expect("powers of the generator form a basis over every subfield");
        Ok(RelativeBasis {
            small: small.clone(),
            large: large.clone(),
            r,
            inverse,
        })
    }

    /// `a = sum_i c_i x^i` with `c_i` in the small field.
    pub(crate) fn coords(&self, a: Elem) -> Vec<Elem> {
        let prime = make_field(self.large.characteristic(), 1).unwrap();
        let digits = self.inverse.vec_mul(&prime, &self.large.coeffs(a));
        let m = self.small.degree() as usize;
        (0..self.r)
            .map(|i| self.small.from_coeffs(&digits[i * m..(i + 1) * m]).unwrap())
            .collect()
    }

    /// Matrix of `y -> y a` in the basis of powers of the generator.
    pub(crate) fn mult_matrix(&self, a: Elem) -> Matrix {
        let x = self.large.generator();
        let rows: Vec<Vec<Elem>> = (0..self.r)
            .map(|i| self.coords(self.large.mul(self.large.pow(x, i as u64), a)))
            .collect();
        Matrix::from_rows(self.r, &rows)
    }
}

fn unit_digits(m: usize, j: usize) -> Vec<u32> {
    let mut d = vec![0; m];
    d[j] = 1;
    d
}

/// `Res_K^L(V)`: an L-module viewed over the subfield K, with basis
/// `v_j x^i` ordered by `j` then `i`.
pub fn restrict_scalars(v: &Rep, small: &Arc<FiniteField>) -> Result<Rep, ModError> {
    let basis = RelativeBasis::new(small, &v.field)?;
    let r = basis.r;
    let mut cache: HashMap<Elem, Matrix> = HashMap::new();
    let d = v.dim;
    let gens = v
        .gens
        .iter()
        .map(|a| {
            let mut out = Matrix::zeros(d * r, d * r);
            for j in 0..d {
                for k in 0..d {
                    let entry = a.get(j, k);
                    if entry == 0 {
                        continue;
                    }
                    let block = cache.entry(entry).or_insert_with(|| basis.mult_matrix(entry));
                    for i in 0..r {
                        for i2 in 0..r {
                            out.set(j * r + i, k * r + i2, block.get(i, i2));
                        }
                    }
                }
            }
            out
        })
        .collect();
    Ok(Rep::from_parts(v.group.clone(), small.clone(), d * r, gens))
}

/// Restriction to a subgroup; the result lives over `h.as_group()`.
pub fn restrict_subgroup(v: &Rep, h: &Subgroup) -> Result<Rep, ModError> {
    if **h.parent() != *v.group {
        return Err(ModError::SubgroupMismatch);
    }
    let gens = h.generators().iter().map(|&x| v.element_matrix(x)).collect();
    Ok(Rep::from_parts(h.as_group().clone(), v.field.clone(), v.dim, gens))
}

/// The same module over another presentation of the same permutation group
/// (for instance a subgroup re-expressed inside a different ambient group).
pub fn transport(v: &Rep, target: &Arc<PermGroup>) -> Result<Rep, ModError> {
    let gens = target
        .generators()
        .iter()
        .map(|perm| {
            v.group
                .index_of(perm)
                .map(|i| v.element_matrix(i))
                .ok_or(ModError::GroupMismatch)
        })
        .collect::<Result<Vec<_>, _>>()?;
    if target.order() != v.group.order() {
        return Err(ModError::GroupMismatch);
    }
    Ok(Rep::from_parts(target.clone(), v.field.clone(), v.dim, gens))
}

/// `Ind_H^G(V)` with basis `v_i (x) t` over the right transversal, `t` major.
pub fn induce(v: &Rep, h: &Subgroup) -> Result<Rep, ModError> {
    if **h.as_group() != *v.group {
        return Err(ModError::SubgroupMismatch);
    }
    let g = h.parent();
    let (reps, coset) = coset_table(g, h);
    let parent_to_h: HashMap<usize, usize> = h.to_parent().iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let images = v.all_element_matrices();
    let d = v.dim;
    let n = reps.len() * d;
    let gens = (0..g.generators().len())
        .map(|s| {
            let gs = g.generator_index(s);
            let mut out = Matrix::zeros(n, n);
            for (a, &t) in reps.iter().enumerate() {
                let y = g.mul(t, gs);
                let b = coset[y];
                let hh = g.mul(y, g.inv(reps[b]));
                let block = &images[parent_to_h[&hh]];
                for i in 0..d {
                    for j in 0..d {
                        out.set(a * d + i, b * d + j, block.get(i, j));
                    }
                }
            }
            out
        })
        .collect();
    Ok(Rep::from_parts(g.clone(), v.field.clone(), n, gens))
}

/// `V^sigma`: every entry replaced by its image under `sigma`.
pub fn frobenius_twist(v: &Rep, sigma: &FieldAutomorphism) -> Result<Rep, ModError> {
    if **sigma.field() != *v.field {
        return Err(ModError::FieldMismatch(sigma.field().to_string(), v.field.to_string()));
    }
    let gens = v.gens.iter().map(|m| m.map(|x| sigma.apply(x))).collect();
    Ok(Rep::from_parts(v.group.clone(), v.field.clone(), v.dim, gens))
}

pub fn direct_sum(v: &Rep, u: &Rep) -> Result<Rep, ModError> {
    v.same_group_and_field(u)?;
    let gens = v
        .gens
        .iter()
        .zip(&u.gens)
        .map(|(a, b)| Matrix::block_diag(&[a, b]))
        .collect();
    Ok(Rep::from_parts(v.group.clone(), v.field.clone(), v.dim + u.dim, gens))
}

pub fn direct_sum_all(parts: &[Rep]) -> Result<Rep, ModError> {
    let (first, rest) = parts.split_first().expect("at least one summand");
    rest.iter().try_fold(first.clone(), |acc, r| direct_sum(&acc, r))
}

// ---------------------------------------------------------------------------
// Hom spaces

/// Intertwiners `M` (source.dim x target.dim) with `rho_source(g) M = M rho_target(g)`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: Rep,
    pub target: Rep,
    pub basis: Vec<Matrix>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

enum Origin {
    Seed(usize),
    Child(usize, usize),
}

/// A basis of `Hom_KG(V, U)`.
///
/// `V` is spun up from a few seed vectors; a homomorphism is determined by
/// the images of the seeds, and the closing relations of the spinning tree
/// give linear conditions on those images.
pub fn hom_space(v: &Rep, u: &Rep) -> Result<HomSpace, ModError> {
    v.same_group_and_field(u)?;
    let f = &*v.field;
    let (dv, du) = (v.dim, u.dim);
    let mut result = HomSpace {
        source: v.clone(),
        target: u.clone(),
        basis: Vec::new(),
    };
    if dv == 0 || du == 0 {
        return Ok(result);
    }
    let ngens = v.gens.len();

    let mut span = EchelonSpace::new(dv);
    let mut vectors: Vec<Vec<Elem>> = Vec::new();
    let mut origin: Vec<Origin> = Vec::new();
    let mut child: HashMap<(usize, usize), usize> = HashMap::new();
    let mut seeds = 0;
    for i in 0..dv {
        let mut e = vec![0; dv];
        e[i] = 1;
        if !span.insert(f, e.clone()) {
            continue;
        }
        vectors.push(e);
        origin.push(Origin::Seed(seeds));
        seeds += 1;
        let mut next = vectors.len() - 1;
        while next < vectors.len() {
            for (s, a) in v.gens.iter().enumerate() {
                let w = a.vec_mul(f, &vectors[next]);
                if span.insert(f, w.clone()) {
                    child.insert((next, s), vectors.len());
                    vectors.push(w);
                    origin.push(Origin::Child(next, s));
                }
            }
            next += 1;
        }
    }
    let bmat = Matrix::from_rows(dv, &vectors);
    let binv = bmat.inverse(f).expect("spinning basis is a basis");

    let unknowns = seeds * du;
    let mut images: Vec<Matrix> = Vec::with_capacity(dv);
    for o in &origin {
        let t = match *o {
            Origin::Seed(k) => {
                let mut t = Matrix::zeros(unknowns, du);
                for c in 0..du {
                    t.set(k * du + c, c, 1);
                }
                t
            }
            Origin::Child(parent, s) => images[parent].mul(f, &u.gens[s]),
        };
        images.push(t);
    }

    let mut constraints = EchelonSpace::new(unknowns);
    'outer: for j in 0..dv {
        for s in 0..ngens {
            if child.contains_key(&(j, s)) {
                continue;
            }
            let w = v.gens[s].vec_mul(f, &vectors[j]);
            let c = binv.vec_mul(f, &w);
            let mut cm = images[j].mul(f, &u.gens[s]);
            for (l, &cl) in c.iter().enumerate() {
                if cl != 0 {
                    cm.add_scaled(f, f.neg(cl), &images[l]);
                }
            }
            let cols = cm.transpose();
            for r in 0..cols.rows() {
                constraints.insert(f, cols.row(r).to_vec());
            }
            if constraints.is_full() {
                break 'outer;
            }
        }
    }
    let solutions = if constraints.is_empty() {
        Matrix::identity(unknowns)
    } else {
        constraints.to_matrix().transpose().left_kernel(f)
    };
    for r in 0..solutions.rows() {
        let x = solutions.row(r);
        let phi_rows: Vec<Vec<Elem>> = images.iter().map(|t| t.vec_mul(f, x)).collect();
        let phi = Matrix::from_rows(du, &phi_rows);
        result.basis.push(binv.mul(f, &phi));
    }
    Ok(result)
}

pub fn end_space(v: &Rep) -> HomSpace {
    hom_space(v, v).expect("a module shares group and field with itself")
}
