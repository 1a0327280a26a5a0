//! Relative projectivity, vertices, sources and the Green correspondence.

use thiserror::Error;

use crate::finite_field::Elem;
use crate::linalg::Matrix;
use crate::meataxe::{decompose, is_component, is_indecomposable, MeatAxeError};
use crate::modrep::{end_space, induce, restrict_subgroup, ModError, Rep};
use crate::perm_group::{normalizer, p_subgroups_up_to_conjugacy, right_transversal, GroupError, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GreenError {
    #[error(transparent)]
    MeatAxe(#[from] MeatAxeError),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

#[derive(Clone, Debug)]
pub struct ProjectivityVerdict {
    pub projective: bool,
    /// `phi` in `End_Q(V)` whose relative trace is the identity.
    pub certificate: Option<Matrix>,
}

/// Higman's criterion: `V` is `Q`-projective iff some `phi` commuting with
/// `Q` satisfies `sum_t rho(t)^-1 phi rho(t) = 1` over a right transversal.
pub fn is_relatively_projective(v: &Rep, q: &Subgroup) -> Result<ProjectivityVerdict, GreenError> {
    let res = restrict_subgroup(v, q)?;
    let f = &**v.field();
    let d = v.dim();
    let basis = end_space(&res).basis;
    let images = v.all_element_matrices();
    let transversal = right_transversal(v.group(), q);
    let g = v.group();
    let traces: Vec<Vec<Elem>> = basis
        .iter()
        .map(|phi| {
            let mut sum = Matrix::zeros(d, d);
            for &t in &transversal {
                let term = images[g.inv(t)].mul(f, phi).mul(f, &images[t]);
                sum = sum.add(f, &term);
            }
            sum.data().to_vec()
        })
        .collect();
    let target = Matrix::identity(d).data().to_vec();
    let Some(coeffs) = solve_left(f, &traces, &target) else {
        return Ok(ProjectivityVerdict {
            projective: false,
            certificate: None,
        });
    };
    let mut phi = Matrix::zeros(d, d);
    for (b, &c) in basis.iter().zip(&coeffs) {
        if c != 0 {
            phi.add_scaled(f, c, b);
        }
    }
    Ok(ProjectivityVerdict {
        projective: true,
        certificate: Some(phi),
    })
}

/// Some `c` with `sum_i c_i rows_i = target`.
fn solve_left(f: &crate::finite_field::FiniteField, rows: &[Vec<Elem>], target: &[Elem]) -> Option<Vec<Elem>> {
    let k = rows.len();
    let mut all = rows.to_vec();
    all.push(target.to_vec());
    let kernel = Matrix::from_rows(target.len(), &all).left_kernel(f);
    (0..kernel.rows()).find_map(|r| {
        let x = kernel.row(r);
        (x[k] != 0).then(|| {
            let s = f.neg(f.inv(x[k]));
            x[..k].iter().map(|&c| f.mul(c, s)).collect()
        })
    })
}

fn require_indecomposable(v: &Rep) -> Result<(), GreenError> {
    if is_indecomposable(v)? {
        Ok(())
    } else {
        Err(MeatAxeError::Decomposable.into())
    }
}

/// A vertex of an indecomposable module: the projective p-subgroup class
/// of least order. Every minimal class found must be the same one.
pub fn vertex(v: &Rep) -> Result<Subgroup, GreenError> {
    require_indecomposable(v)?;
    let p = v.field().characteristic();
    let mut minimal: Vec<Subgroup> = Vec::new();
    for q in p_subgroups_up_to_conjugacy(v.group(), p) {
        if minimal.iter().any(|m| m.is_subconjugate_to(&q)) {
            continue;
        }
        if is_relatively_projective(v, &q)?.projective {
            minimal.push(q);
        }
    }
    match minimal.len() {
        1 => Ok(minimal.pop().unwrap()),
        0 => Err(GreenError::Consistency(
            "no p-subgroup passes Higman's criterion".into(),
        )),
        n => Err(GreenError::Consistency(format!(
            "{n} non-conjugate minimal projectivity subgroups"
        ))),
    }
}

/// The first component `U` of `Res_Q(V)` in canonical order with `V | Ind_Q^G(U)`.
pub fn source(v: &Rep, q: &Subgroup) -> Result<Rep, GreenError> {
    require_indecomposable(v)?;
    sources(v, q)?
        .into_iter()
        .next()
        .ok_or_else(|| GreenError::Consistency("no component of the restriction induces back to the module".into()))
}

/// Every component type of `Res_Q(V)` that induces back to a multiple of `V`.
pub fn sources(v: &Rep, q: &Subgroup) -> Result<Vec<Rep>, GreenError> {
    let res = restrict_subgroup(v, q)?;
    let mut out = Vec::new();
    for (u, _) in decompose(&res, 0)?.summands {
        if is_component(v, &induce(&u, q)?)? {
            out.push(u);
        }
    }
    Ok(out)
}

/// The unique component of `Res_H(V)` whose vertex is `H`-conjugate to `Q`.
pub fn green_correspondent(v: &Rep, q: &Subgroup, h: &Subgroup) -> Result<Rep, GreenError> {
    if !normalizer(v.group(), q).is_subgroup_of(h) {
        return Err(GreenError::Precondition(
            "the subgroup must contain the normalizer of the vertex".into(),
        ));
    }
    let q_in_h = q.within(h)?;
    let res = restrict_subgroup(v, h)?;
    let mut found = Vec::new();
    for (u, mult) in decompose(&res, 0)?.summands {
        if vertex(&u)?.is_conjugate_in_parent(&q_in_h) {
            for _ in 0..mult {
                found.push(u.clone());
            }
        }
    }
    if found.len() != 1 {
        return Err(GreenError::Consistency(format!(
            "{} components of the restriction have the given vertex",
            found.len()
        )));
    }
    Ok(found.pop().unwrap())
}
