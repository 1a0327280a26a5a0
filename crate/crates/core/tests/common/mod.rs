#![allow(dead_code)]

use std::sync::Arc;

use modclass::finite_field::FiniteField;
use modclass::linalg::Matrix;
use modclass::modrep::{direct_sum, induce, Rep};
use modclass::perm_group::{PermGroup, Subgroup};
use rand::Rng;

pub const BATTERY: [(&str, u32); 9] = [
    ("C3", 2),
    ("C7", 2),
    ("S3", 2),
    ("S3", 3),
    ("A4", 2),
    ("A4", 3),
    ("D8", 2),
    ("Q8", 2),
    ("S3", 5),
];

/// Every 1-dimensional module of `h.as_group()` over `f`, by trying all
/// assignments of nonzero scalars to the generators.
pub fn one_dim_modules(h: &Subgroup, f: &Arc<FiniteField>) -> Vec<Rep> {
    let group = h.as_group();
    let k = group.generators().len();
    let units: Vec<u32> = (1..f.order()).collect();
    let mut out = Vec::new();
    let total = units.len().pow(k as u32);
    for mut t in 0..total {
        let mut gens = Vec::with_capacity(k);
        for _ in 0..k {
            gens.push(Matrix::from_vec(1, 1, vec![units[t % units.len()]]));
            t /= units.len();
        }
        if let Ok(r) = Rep::with_dim(group.clone(), f.clone(), 1, gens) {
            out.push(r);
        }
    }
    out
}

/// A direct sum of one or two modules induced from random 1-dimensional
/// modules of random cyclic subgroups, of total dimension at most `max_dim`.
pub fn random_module<R: Rng>(g: &Arc<PermGroup>, f: &Arc<FiniteField>, max_dim: usize, rng: &mut R) -> Rep {
    let mut parts: Vec<Rep> = Vec::new();
    let wanted = rng.gen_range(1..=2);
    let mut dim = 0;
    for _ in 0..50 {
        if parts.len() == wanted {
            break;
        }
        let x = rng.gen_range(1..g.order());
        let h = Subgroup::generated_by(g, &[x]);
        let index = g.order() / h.order();
        if dim + index > max_dim {
            continue;
        }
        let ones = one_dim_modules(&h, f);
        let u = &ones[rng.gen_range(0..ones.len())];
        parts.push(induce(u, &h).unwrap());
        dim += index;
    }
    assert!(!parts.is_empty(), "no cyclic subgroup has index at most {max_dim}");
    let mut m = parts.remove(0);
    for p in parts {
        m = direct_sum(&m, &p).unwrap();
    }
    m
}
