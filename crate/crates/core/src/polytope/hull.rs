//! Convex hulls of small point sets in dimension ≤ 4.
//!
//! Points are first reduced to their affine hull. Dimension 1 and 2 are
//! handled directly (extremes, monotone chain); dimensions 3 and 4 use an
//! incremental beneath–beyond construction with simplicial facets. A facet
//! vertex is reported as a polytope vertex only if the normals of its
//! incident facets span the whole space, which removes points lying inside
//! edges or faces.

use crate::prelude::*;

/// Relative tolerance for coincident, collinear and coplanar points.
pub const SNAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Hull {
    /// Dimension of the affine hull.
    pub dim: usize,
    /// Indices of the vertices in the input slice.
    pub vertices: Vec<usize>,
    /// `dim`-dimensional volume inside the affine hull.
    pub volume: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        if a[p][col] == 0.0 {
            return 0.0;
        }
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
        }
    }
    d
}

/// Unit normal to the hyperplane through `k` points in `ℝᵏ`.
fn hyperplane_normal(points: &[&[f64]]) -> Vec<f64> {
    let k = points[0].len();
    let rows: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    let mut normal = vec![0.0; k];
    for (j, nj) in normal.iter_mut().enumerate() {
        let minor: Vec<Vec<f64>> =
            rows.iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect()).collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *nj = sign * if minor.is_empty() { 1.0 } else { det(&minor) };
    }
    let len = dot(&normal, &normal).sqrt();
    normal.iter().map(|x| x / len).collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

/// Rank of a set of vectors by Gram–Schmidt with an absolute tolerance.
fn rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for b in &basis {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let len = dot(&r, &r).sqrt();
        if len > tol {
            basis.push(r.into_iter().map(|x| x / len).collect());
        }
    }
    basis.len()
}

pub fn convex_hull(points: &[Vec<f64>]) -> Hull {
    if points.is_empty() {
        return Hull { dim: 0, vertices: Vec::new(), volume: 0.0 };
    }
    let scale = points.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = SNAP_TOL * scale;

    // affine hull by greedy Gram–Schmidt on differences from the first point
    let origin = &points[0];
    let diffs: Vec<Vec<f64>> = points.iter().map(|p| sub(p, origin)).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut simplex = vec![0usize];
    loop {
        let residual = |d: &Vec<f64>| {
            let mut r = d.clone();
            for b in &basis {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            r
        };
        let best = diffs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let r = residual(d);
                (i, dot(&r, &r).sqrt(), r)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, len, r)) if len > tol && basis.len() < origin.len() => {
                basis.push(r.into_iter().map(|x| x / len).collect());
                simplex.push(i);
            }
            _ => break,
        }
    }
    let k = basis.len();
    let local: Vec<Vec<f64>> = diffs.iter().map(|d| basis.iter().map(|b| dot(d, b)).collect()).collect();

    match k {
        0 => Hull { dim: 0, vertices: vec![0], volume: 1.0 },
        1 => {
            let lo = (0..local.len()).min_by(|&a, &b| local[a][0].total_cmp(&local[b][0])).unwrap_or(0);
            let hi = (0..local.len()).max_by(|&a, &b| local[a][0].total_cmp(&local[b][0])).unwrap_or(0);
            Hull { dim: 1, vertices: vec![lo, hi], volume: local[hi][0] - local[lo][0] }
        }
        2 => monotone_chain(&local, tol * scale),
        _ => beneath_beyond(&local, &simplex, tol),
    }
}

fn monotone_chain(pts: &[Vec<f64>], area_tol: f64) -> Hull {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]).then(pts[a][1].total_cmp(&pts[b][1])));
    let cross = |o: usize, a: usize, b: usize| {
        (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])
    };
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        for k in 0..idx.len() {
            let i = if pass == 0 { idx[k] } else { idx[idx.len() - 1 - k] };
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= area_tol {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    let mut area = 0.0;
    for w in 0..hull.len() {
        let (a, b) = (hull[w], hull[(w + 1) % hull.len()]);
        area += pts[a][0] * pts[b][1] - pts[b][0] * pts[a][1];
    }
    Hull { dim: 2, vertices: hull, volume: 0.5 * area.abs() }
}

struct Facet {
    vertices: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
}

fn beneath_beyond(pts: &[Vec<f64>], simplex: &[usize], tol: f64) -> Hull {
    let k = pts[0].len();
    let interior: Vec<f64> =
        (0..k).map(|c| simplex.iter().map(|&i| pts[i][c]).sum::<f64>() / simplex.len() as f64).collect();
    let make_facet = |vertices: Vec<usize>| -> Facet {
        let refs: Vec<&[f64]> = vertices.iter().map(|&i| pts[i].as_slice()).collect();
        let mut normal = hyperplane_normal(&refs);
        let mut offset = dot(&normal, &pts[vertices[0]]);
        if dot(&normal, &interior) > offset {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        Facet { vertices, normal, offset }
    };

    let mut facets: Vec<Facet> = (0..simplex.len())
        .map(|skip| make_facet(simplex.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &i)| i).collect()))
        .collect();

    for p in 0..pts.len() {
        if simplex.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = facets.iter().map(|f| dot(&f.normal, &pts[p]) - f.offset > tol).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        // ridges of visible facets seen exactly once form the horizon
        let mut ridges: Vec<(Vec<usize>, usize)> = Vec::new();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..f.vertices.len() {
                let mut ridge: Vec<usize> =
                    f.vertices.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &i)| i).collect();
                ridge.sort_unstable();
                match ridges.iter_mut().find(|(r, _)| *r == ridge) {
                    Some(entry) => entry.1 += 1,
                    None => ridges.push((ridge, 1)),
                }
            }
        }
        let mut next: Vec<Facet> =
            facets.into_iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| f).collect();
        for (mut ridge, seen) in ridges {
            if seen == 1 {
                ridge.push(p);
                next.push(make_facet(ridge));
            }
        }
        facets = next;
    }

    let mut volume = 0.0;
    for f in &facets {
        let rows: Vec<Vec<f64>> = f.vertices.iter().map(|&i| sub(&pts[i], &interior)).collect();
        volume += det(&rows).abs();
    }
    volume /= factorial(k);

    let mut candidates: Vec<usize> = facets.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    candidates.sort_unstable();
    candidates.dedup();
    let vertices = candidates
        .into_iter()
        .filter(|&v| {
            let normals: Vec<Vec<f64>> =
                facets.iter().filter(|f| f.vertices.contains(&v)).map(|f| f.normal.clone()).collect();
            rank(&normals, 1e-9) == k
        })
        .collect();
    Hull { dim: k, vertices, volume }
}
