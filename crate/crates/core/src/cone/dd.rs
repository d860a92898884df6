//! Double description conversion from inequalities to generators.
//!
//! Rays are kept minimal after every constraint (duplicates and rays whose
//! active set is strictly dominated are dropped), which makes the
//! combinatorial adjacency test exact.

use crate::error::{Error, Result};
use crate::scalar::{dot, max_abs, Scalar};

/// Largest dimension accepted by [`generators_of`].
pub const MAX_DIM: usize = 4;

/// Generators of `{u : <a, u> <= 0 for every row a}`.
///
/// The lineality space, if any, is returned as pairs `l, -l`.
pub fn generators_of<S: Scalar>(dim: usize, rows: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(dim));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
    }

    let mut lineality: Vec<Vec<S>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let mut rays: Vec<Vec<S>> = Vec::new();
    let mut processed: Vec<&Vec<S>> = Vec::new();

    for a in rows {
        if a.iter().all(Scalar::near_zero) {
            continue;
        }
        if let Some(idx) = lineality.iter().position(|l| !dot(a, l).near_zero()) {
            let mut l = lineality.remove(idx);
            let mut al = dot(a, &l);
            if al > S::zero() {
                l = neg(&l);
                al = -al;
            }
            for m in lineality.iter_mut().chain(rays.iter_mut()) {
                let am = dot(a, m);
                if !am.is_zero() {
                    let c = am / al.clone();
                    for (mi, li) in m.iter_mut().zip(&l) {
                        *mi = mi.clone() - c.clone() * li.clone();
                    }
                }
            }
            rays.push(normalize(l));
        } else {
            let values: Vec<S> = rays.iter().map(|r| dot(a, r)).collect();
            let sign = |v: &S| {
                if v.near_zero() {
                    0
                } else if *v > S::zero() {
                    1
                } else {
                    -1
                }
            };
            let zero_sets: Vec<Vec<usize>> = rays.iter().map(|r| zero_set(&processed, r)).collect();
            let pointed_dim = dim - lineality.len();
            let mut next: Vec<Vec<S>> = Vec::new();
            for (r, v) in rays.iter().zip(&values) {
                if sign(v) <= 0 {
                    next.push(r.clone());
                }
            }
            for (p, vp) in values.iter().enumerate().filter(|(_, v)| sign(v) > 0) {
                for (n, vn) in values.iter().enumerate().filter(|(_, v)| sign(v) < 0) {
                    let common: Vec<usize> = zero_sets[p].iter().copied().filter(|i| zero_sets[n].contains(i)).collect();
                    if common.len() + 2 < pointed_dim {
                        continue;
                    }
                    let blocked = (0..rays.len())
                        .filter(|&r| r != p && r != n)
                        .any(|r| common.iter().all(|i| zero_sets[r].contains(i)));
                    if blocked {
                        continue;
                    }
                    let combined: Vec<S> = rays[n]
                        .iter()
                        .zip(&rays[p])
                        .map(|(rn, rp)| vp.clone() * rn.clone() - vn.clone() * rp.clone())
                        .collect();
                    if !combined.iter().all(Scalar::near_zero) {
                        next.push(normalize(combined));
                    }
                }
            }
            rays = next;
        }
        processed.push(a);
        rays = minimize(rays, &processed);
    }

    let mut out = rays;
    for l in lineality {
        let l = normalize(l);
        out.push(neg(&l));
        out.push(l);
    }
    Ok(out)
}

fn neg<S: Scalar>(v: &[S]) -> Vec<S> {
    v.iter().map(|x| -x.clone()).collect()
}

/// Scales a nonzero vector so that its largest entry in magnitude is 1.
pub fn normalize<S: Scalar>(v: Vec<S>) -> Vec<S> {
    let m = max_abs(&v);
    if m.is_zero() {
        return v;
    }
    v.into_iter().map(|x| x / m.clone()).collect()
}

fn zero_set<S: Scalar>(rows: &[&Vec<S>], r: &[S]) -> Vec<usize> {
    rows.iter()
        .enumerate()
        .filter(|(_, a)| dot(a, r).near_zero())
        .map(|(i, _)| i)
        .collect()
}

fn same_direction<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).near_zero())
}

fn minimize<S: Scalar>(rays: Vec<Vec<S>>, rows: &[&Vec<S>]) -> Vec<Vec<S>> {
    let mut unique: Vec<Vec<S>> = Vec::new();
    for r in rays {
        if r.iter().all(Scalar::near_zero) {
            continue;
        }
        let r = normalize(r);
        if !unique.iter().any(|u| same_direction(u, &r)) {
            unique.push(r);
        }
    }
    let zs: Vec<Vec<usize>> = unique.iter().map(|r| zero_set(rows, r)).collect();
    unique
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            !zs.iter().enumerate().any(|(j, zj)| {
                j != *i && zj.len() > zs[*i].len() && zs[*i].iter().all(|k| zj.contains(k))
            })
        })
        .map(|(_, r)| r.clone())
        .collect()
}
