//! Independent oracles and random inputs shared by the integration tests
//! and the acceptance suite. Nothing here calls into the code under test
//! except for plain data types.

#![allow(dead_code)]

use std::collections::HashSet;

use pose_synth::{AxisAngle, Pose, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n2 = v.norm_squared();
        if n2 > 1e-6 && n2 <= 1.0 {
            return v / n2.sqrt();
        }
    }
}

/// Rotation vector with a uniform axis and angle uniform in `[lo, hi]`.
pub fn rotation(rng: &mut impl Rng, lo: f64, hi: f64) -> AxisAngle {
    AxisAngle::new(unit_vector(rng) * rng.random_range(lo..=hi))
}

pub fn tabletop_pose(rng: &mut impl Rng) -> Pose {
    let r = rotation(rng, 0.0, std::f64::consts::PI);
    let t = Vec3::new(
        rng.random_range(-0.15..0.15),
        rng.random_range(-0.1..0.1),
        rng.random_range(0.6..1.2),
    );
    Pose::new(r, t)
}

/// Points on an ellipsoid surface with the given semi-axes.
pub fn ellipsoid(rng: &mut impl Rng, n: usize, axes: Vec3) -> Vec<Vec3> {
    (0..n).map(|_| unit_vector(rng).component_mul(&axes)).collect()
}

pub fn cube_points(rng: &mut impl Rng, n: usize, half: f64) -> Vec<Vec3> {
    (0..n)
        .map(|_| {
            Vec3::new(
                rng.random_range(-half..half),
                rng.random_range(-half..half),
                rng.random_range(-half..half),
            )
        })
        .collect()
}

fn orient(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a))
}

/// Outward-oriented triangles of the convex hull by gift wrapping. Assumes
/// general position (no four coplanar points), as for random surface
/// samples of a strictly convex body.
pub fn convex_facets(p: &[Vec3]) -> Vec<[usize; 3]> {
    let n = p.len();
    assert!(n >= 4);
    let a = (0..n).min_by(|&i, &j| p[i].z.total_cmp(&p[j].z)).unwrap();
    let mut first = None;
    'search: for b in 0..n {
        for c in 0..n {
            if b == a || c == a || b == c {
                continue;
            }
            let supporting = (0..n).all(|d| d == a || d == b || d == c || orient(&p[a], &p[b], &p[c], &p[d]) < 0.0);
            if supporting {
                first = Some([a, b, c]);
                break 'search;
            }
        }
    }
    let first = first.expect("no supporting facet through the lowest point");

    let key = |f: &[usize; 3]| {
        let mut k = *f;
        k.sort_unstable();
        k
    };
    let mut facets = vec![first];
    let mut known: HashSet<[usize; 3]> = HashSet::from([key(&first)]);
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let mut stack = vec![(first[0], first[1]), (first[1], first[2]), (first[2], first[0])];
    while let Some((u, v)) = stack.pop() {
        if !done.insert((u, v)) {
            continue;
        }
        let mut w = (0..n).find(|&k| k != u && k != v).unwrap();
        for q in 0..n {
            if q != u && q != v && q != w && orient(&p[v], &p[u], &p[w], &p[q]) > 0.0 {
                w = q;
            }
        }
        let g = [v, u, w];
        done.insert((v, u));
        for e in [(u, w), (w, v)] {
            if !done.contains(&e) {
                stack.push(e);
            }
        }
        if known.insert(key(&g)) {
            facets.push(g);
        }
    }
    facets
}

/// Segment parameter in `(0, 1)` where `o + t d` crosses triangle `abc`.
fn segment_hit(o: &Vec3, d: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> Option<f64> {
    let e1 = b - a;
    let e2 = c - a;
    let h = d.cross(&e2);
    let det = e1.dot(&h);
    if det.abs() < 1e-300 {
        return None;
    }
    let f = 1.0 / det;
    let s = o - a;
    let u = f * s.dot(&h);
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let q = s.cross(&e1);
    let v = f * d.dot(&q);
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    Some(f * e2.dot(&q))
}

/// Ray-cast visibility against the cloud's convex polytope: point `i` is
/// visible iff the segment from `viewpoint` to it crosses no hull facet
/// that does not contain it.
pub fn raycast_visible(p: &[Vec3], viewpoint: &Vec3) -> Vec<bool> {
    let facets = convex_facets(p);
    (0..p.len())
        .map(|i| {
            let d = p[i] - viewpoint;
            !facets.iter().any(|f| {
                !f.contains(&i)
                    && segment_hit(viewpoint, &d, &p[f[0]], &p[f[1]], &p[f[2]])
                        .is_some_and(|t| t > 1e-12 && t < 1.0 - 1e-12)
            })
        })
        .collect()
}

/// Angular-cone visibility: hidden iff another point within `deg` degrees
/// of the viewing ray is strictly nearer.
pub fn cone_visible(p: &[Vec3], viewpoint: &Vec3, deg: f64) -> Vec<bool> {
    let cos = deg.to_radians().cos();
    (0..p.len())
        .map(|i| {
            let di = p[i] - viewpoint;
            let ni = di.norm();
            !p.iter().enumerate().any(|(j, q)| {
                let dj = q - viewpoint;
                let nj = dj.norm();
                j != i && nj < ni && di.dot(&dj) / (ni * nj) > cos
            })
        })
        .collect()
}

pub fn agreement(a: &[bool], b: &[bool]) -> f64 {
    a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / a.len() as f64
}

pub fn mask(n: usize, indices: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in indices {
        m[i] = true;
    }
    m
}

pub fn transform(pose: &Pose, x: &Vec3) -> Vec3 {
    // Independent of the library's matrix conversion: Rodrigues directly.
    let r = pose.rotation.vector();
    let theta = r.norm();
    let rotated = if theta < 1e-12 {
        x + r.cross(x)
    } else {
        let k = r / theta;
        x * theta.cos() + k.cross(x) * theta.sin() + k * k.dot(x) * (1.0 - theta.cos())
    };
    rotated + pose.translation
}

pub fn brute_add(gt: &Pose, pred: &Pose, model: &[Vec3]) -> f64 {
    model
        .iter()
        .map(|x| (transform(gt, x) - transform(pred, x)).norm())
        .sum::<f64>()
        / model.len() as f64
}

pub fn brute_adds(gt: &Pose, pred: &Pose, model: &[Vec3]) -> f64 {
    let posed: Vec<Vec3> = model.iter().map(|x| transform(pred, x)).collect();
    model
        .iter()
        .map(|x| {
            let g = transform(gt, x);
            posed.iter().map(|q| (g - q).norm()).fold(f64::INFINITY, f64::min)
        })
        .sum::<f64>()
        / model.len() as f64
}

pub fn brute_chamfer(a: &[Vec3], b: &[Vec3]) -> f64 {
    let dir = |x: &[Vec3], y: &[Vec3]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .sum::<f64>()
            / x.len() as f64
    };
    dir(a, b) + dir(b, a)
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
