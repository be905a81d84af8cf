//! Quickhull in 3D, reporting which input points lie on the hull.
//!
//! Only the vertex set is exposed. Points within `eps` of a final facet
//! plane are reported as on-hull too. The builder supports two stages: the
//! hull of a prefix of the input is completed first and its on-hull set is
//! snapshotted, then the remaining points are inserted. Stage-two points are
//! carried through the face splits of stage one in separate conflict lists,
//! so no point location is needed when stage two starts.

use crate::geometry::Vec3;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PointState {
    Pending,
    Vertex,
    Coplanar,
    Interior,
}

#[derive(Debug, Clone)]
struct Face {
    v: [u32; 3],
    nbr: [u32; 3],
    normal: Vec3,
    offset: f64,
    outside: [u32; 2],
    furthest: [u32; 2],
    furthest_dist: [f64; 2],
    coplanar: u32,
    alive: bool,
    epoch: u32,
    visible: bool,
}

impl Face {
    fn new(v: [u32; 3], normal: Vec3, offset: f64) -> Self {
        Face {
            v,
            nbr: [NONE; 3],
            normal,
            offset,
            outside: [NONE; 2],
            furthest: [NONE; 2],
            furthest_dist: [0.0; 2],
            coplanar: NONE,
            alive: true,
            epoch: 0,
            visible: false,
        }
    }

    #[inline]
    fn distance(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Affine dimension of a point set that quickhull could not span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degenerate {
    Point,
    Line,
    Plane,
}

/// On-hull masks for a two-stage build.
#[derive(Debug, Clone)]
pub struct StagedMasks {
    /// Hull of `points[..stage_end]` alone.
    pub first: Vec<bool>,
    /// Hull of all points.
    pub full: Vec<bool>,
}

/// Tolerance for a point cloud with the given coordinate magnitude.
pub fn tolerance(points: &[Vec3]) -> f64 {
    let scale = points.iter().fold(0.0f64, |m, p| m.max(p.amax()));
    1e-9f64.max(64.0 * f64::EPSILON * scale)
}

/// Marks every point that is a hull vertex or lies within `eps` of a hull
/// facet. Degenerate (planar, collinear, coincident) inputs report the
/// vertices of their lower-dimensional hull.
pub fn on_hull_mask(points: &[Vec3], eps: f64) -> Vec<bool> {
    on_hull_mask_staged(points, points.len(), eps).full
}

/// Two-stage variant: `first` is the mask of `points[..stage_end]` alone,
/// `full` that of all points. Results equal two independent builds up to
/// the `eps` handling of near-coplanar points.
pub fn on_hull_mask_staged(points: &[Vec3], stage_end: usize, eps: f64) -> StagedMasks {
    assert!(stage_end <= points.len());
    if stage_end == 0 {
        return StagedMasks {
            first: Vec::new(),
            full: on_hull_mask_staged(points, points.len(), eps).full,
        };
    }
    let center = points[..stage_end]
        .iter()
        .fold(Vec3::zeros(), |a, p| a + p)
        / stage_end as f64;
    let centered: Vec<Vec3> = points.iter().map(|p| p - center).collect();

    match Quickhull::new(&centered, stage_end, eps) {
        Ok(mut qh) => {
            qh.run(0);
            let first = qh.mask(stage_end);
            if stage_end == points.len() {
                return StagedMasks {
                    full: first.clone(),
                    first,
                };
            }
            qh.start_stage(1);
            qh.run(1);
            StagedMasks {
                first,
                full: qh.mask(points.len()),
            }
        }
        Err(_) => {
            let first = degenerate_mask(&centered[..stage_end], eps);
            let full = if stage_end == points.len() {
                first.clone()
            } else {
                match Quickhull::new(&centered, points.len(), eps) {
                    Ok(mut qh) => {
                        qh.run(0);
                        qh.mask(points.len())
                    }
                    Err(_) => degenerate_mask(&centered, eps),
                }
            };
            StagedMasks { first, full }
        }
    }
}

struct Quickhull<'a> {
    pts: &'a [Vec3],
    stage_end: usize,
    eps: f64,
    faces: Vec<Face>,
    next: Vec<u32>,
    state: Vec<PointState>,
    pending: Vec<u32>,
    epoch: u32,
    // scratch
    visible: Vec<u32>,
    horizon: Vec<(u32, u32, u32)>,
    vertex_slot: Vec<u32>,
    touched: Vec<u32>,
    new_faces: Vec<u32>,
    planes: Vec<(Vec3, f64)>,
    ordered: Vec<(u32, u32, u32)>,
}

impl<'a> Quickhull<'a> {
    fn new(pts: &'a [Vec3], stage_end: usize, eps: f64) -> Result<Self, Degenerate> {
        let simplex = initial_simplex(&pts[..stage_end], eps)?;
        let mut qh = Quickhull {
            pts,
            stage_end,
            eps,
            faces: Vec::with_capacity(pts.len() * 4),
            next: vec![NONE; pts.len()],
            state: vec![PointState::Pending; pts.len()],
            pending: Vec::new(),
            epoch: 0,
            visible: Vec::new(),
            horizon: Vec::new(),
            vertex_slot: vec![NONE; pts.len()],
            touched: Vec::new(),
            new_faces: Vec::new(),
            planes: Vec::new(),
            ordered: Vec::new(),
        };
        qh.build_simplex(simplex);
        Ok(qh)
    }

    fn stage_of(&self, i: u32) -> usize {
        usize::from(i as usize >= self.stage_end)
    }

    fn build_simplex(&mut self, s: [u32; 4]) {
        let [a, b, c, d] = s;
        let tris = [[a, b, c], [a, d, b], [b, d, c], [c, d, a]];
        let others = [d, c, a, b];
        for (tri, &other) in tris.iter().zip(&others) {
            let mut tri = *tri;
            let (mut n, mut off) = self.plane(tri);
            if n.dot(&self.pts[other as usize]) - off > 0.0 {
                tri.swap(0, 1);
                n = -n;
                off = -off;
            }
            self.faces.push(Face::new(tri, n, off));
        }
        for i in 0..4 {
            for e in 0..3 {
                let (p, q) = (self.faces[i].v[e], self.faces[i].v[(e + 1) % 3]);
                for j in 0..4 {
                    if i == j {
                        continue;
                    }
                    if let Some(k) = edge_slot(&self.faces[j].v, q, p) {
                        self.faces[i].nbr[e] = j as u32;
                        debug_assert!(self.faces[j].nbr[k] == NONE || self.faces[j].nbr[k] == i as u32);
                    }
                }
            }
        }
        for &v in &s {
            self.state[v as usize] = PointState::Vertex;
        }
        let all_faces: Vec<u32> = (0..4).collect();
        for i in 0..self.pts.len() as u32 {
            if self.state[i as usize] == PointState::Pending {
                self.assign(i, &all_faces);
            }
        }
        for f in 0..4 {
            if self.faces[f].outside[0] != NONE {
                self.pending.push(f as u32);
            }
        }
    }

    fn plane(&self, tri: [u32; 3]) -> (Vec3, f64) {
        let a = self.pts[tri[0] as usize];
        let b = self.pts[tri[1] as usize];
        let c = self.pts[tri[2] as usize];
        let n = (b - a).cross(&(c - a));
        let len = n.norm();
        let n = if len > 0.0 { n / len } else { n };
        (n, n.dot(&a))
    }

    /// Puts point `i` into the conflict or coplanar list of one of `faces`,
    /// or marks it interior.
    fn assign(&mut self, i: u32, faces: &[u32]) {
        let p = self.pts[i as usize];
        let stage = self.stage_of(i);
        let mut best = NONE;
        let mut best_dist = f64::NEG_INFINITY;
        for &f in faces {
            let d = self.faces[f as usize].distance(&p);
            if d > self.eps {
                let face = &mut self.faces[f as usize];
                self.next[i as usize] = face.outside[stage];
                face.outside[stage] = i;
                if face.furthest[stage] == NONE || d > face.furthest_dist[stage] {
                    face.furthest[stage] = i;
                    face.furthest_dist[stage] = d;
                }
                self.state[i as usize] = PointState::Pending;
                return;
            }
            if d > best_dist {
                best_dist = d;
                best = f;
            }
        }
        if best != NONE && best_dist >= -self.eps {
            let face = &mut self.faces[best as usize];
            self.next[i as usize] = face.coplanar;
            face.coplanar = i;
            self.state[i as usize] = PointState::Coplanar;
        } else {
            self.state[i as usize] = PointState::Interior;
        }
    }

    fn start_stage(&mut self, stage: usize) {
        self.pending.clear();
        for (f, face) in self.faces.iter().enumerate() {
            if face.alive && face.outside[stage] != NONE {
                self.pending.push(f as u32);
            }
        }
    }

    fn run(&mut self, stage: usize) {
        while let Some(f) = self.pending.pop() {
            let face = &self.faces[f as usize];
            if !face.alive || face.furthest[stage] == NONE {
                continue;
            }
            let eye = face.furthest[stage];
            if !self.add_point(f, eye, stage) {
                // Insertion failed on a numerically degenerate configuration;
                // keep the point as coplanar so it still counts as on-hull
                // and drop it from its conflict list.
                self.detach(f, eye, stage);
                let face = &mut self.faces[f as usize];
                self.next[eye as usize] = face.coplanar;
                face.coplanar = eye;
                self.state[eye as usize] = PointState::Coplanar;
                if self.faces[f as usize].outside[stage] != NONE {
                    self.pending.push(f);
                }
            }
        }
    }

    /// Removes `i` from the stage list of `f` and recomputes the furthest
    /// point of that list.
    fn detach(&mut self, f: u32, i: u32, stage: usize) {
        let mut prev = NONE;
        let mut cur = self.faces[f as usize].outside[stage];
        while cur != NONE && cur != i {
            prev = cur;
            cur = self.next[cur as usize];
        }
        if cur == i {
            let nxt = self.next[i as usize];
            if prev == NONE {
                self.faces[f as usize].outside[stage] = nxt;
            } else {
                self.next[prev as usize] = nxt;
            }
        }
        let mut best = NONE;
        let mut best_d = 0.0;
        let mut cur = self.faces[f as usize].outside[stage];
        while cur != NONE {
            let d = self.faces[f as usize].distance(&self.pts[cur as usize]);
            if best == NONE || d > best_d {
                best = cur;
                best_d = d;
            }
            cur = self.next[cur as usize];
        }
        let face = &mut self.faces[f as usize];
        face.furthest[stage] = best;
        face.furthest_dist[stage] = best_d;
    }

    fn add_point(&mut self, start: u32, eye: u32, stage: usize) -> bool {
        let p = self.pts[eye as usize];
        self.epoch = self.epoch.wrapping_add(1);
        let epoch = self.epoch;

        // Visible region by flood fill.
        self.visible.clear();
        {
            let f = &mut self.faces[start as usize];
            f.epoch = epoch;
            f.visible = true;
        }
        self.visible.push(start);
        let mut k = 0;
        while k < self.visible.len() {
            let f = self.visible[k];
            k += 1;
            for e in 0..3 {
                let g = self.faces[f as usize].nbr[e];
                let gf = &mut self.faces[g as usize];
                if gf.epoch == epoch {
                    continue;
                }
                gf.epoch = epoch;
                gf.visible = gf.distance(&p) > self.eps;
                if gf.visible {
                    self.visible.push(g);
                }
            }
        }

        // Horizon edges keyed by their start vertex.
        self.horizon.clear();
        for &f in &self.visible {
            let face = &self.faces[f as usize];
            for e in 0..3 {
                let g = face.nbr[e];
                let gf = &self.faces[g as usize];
                if !(gf.epoch == epoch && gf.visible) {
                    self.horizon.push((face.v[e], face.v[(e + 1) % 3], g));
                }
            }
        }
        let ok = self.order_horizon();
        for &v in &self.touched {
            self.vertex_slot[v as usize] = NONE;
        }
        self.touched.clear();
        if !ok {
            return false;
        }

        // Planes of the cone faces; bail out on degenerate triangles.
        let a0 = self.horizon.len();
        let mut planes = std::mem::take(&mut self.planes);
        planes.clear();
        for &(a, b, _) in &self.horizon {
            let pa = self.pts[a as usize];
            let n = (self.pts[b as usize] - pa).cross(&(p - pa));
            let len = n.norm();
            if !(len > 0.0) {
                self.planes = planes;
                return false;
            }
            let n = n / len;
            planes.push((n, n.dot(&pa)));
        }

        // Commit.
        self.new_faces.clear();
        let base = self.faces.len() as u32;
        for (k, (&(a, b, g), &(n, off))) in self.horizon.iter().zip(&planes).enumerate() {
            let mut face = Face::new([a, b, eye], n, off);
            let id = base + k as u32;
            face.nbr = [
                g,
                base + ((k + 1) % a0) as u32,
                base + ((k + a0 - 1) % a0) as u32,
            ];
            self.faces.push(face);
            self.new_faces.push(id);
            let gface = &mut self.faces[g as usize];
            let slot = edge_slot(&gface.v, b, a).expect("horizon neighbor shares the edge");
            gface.nbr[slot] = id;
        }
        self.state[eye as usize] = PointState::Vertex;
        self.planes = planes;

        // Reassign conflict and coplanar points of the deleted faces.
        let new_faces = std::mem::take(&mut self.new_faces);
        let visible = std::mem::take(&mut self.visible);
        for &f in &visible {
            let face = &mut self.faces[f as usize];
            face.alive = false;
            let lists = [face.outside[0], face.outside[1], face.coplanar];
            face.outside = [NONE; 2];
            face.coplanar = NONE;
            for head in lists {
                let mut cur = head;
                while cur != NONE {
                    let nxt = self.next[cur as usize];
                    if cur != eye {
                        self.assign(cur, &new_faces);
                    }
                    cur = nxt;
                }
            }
        }
        for &f in &new_faces {
            if self.faces[f as usize].outside[stage] != NONE {
                self.pending.push(f);
            }
        }
        self.visible = visible;
        self.new_faces = new_faces;
        true
    }

    /// Orders `self.horizon` into a closed loop. Returns false when the
    /// visible region is not a topological disk.
    fn order_horizon(&mut self) -> bool {
        let n = self.horizon.len();
        if n < 3 {
            return false;
        }
        for (k, &(a, _, _)) in self.horizon.iter().enumerate() {
            if self.vertex_slot[a as usize] != NONE {
                return false;
            }
            self.vertex_slot[a as usize] = k as u32;
            self.touched.push(a);
        }
        let mut ordered = std::mem::take(&mut self.ordered);
        ordered.clear();
        let mut k = 0usize;
        for _ in 0..n {
            let edge = self.horizon[k];
            ordered.push(edge);
            let nk = self.vertex_slot[edge.1 as usize];
            if nk == NONE {
                self.ordered = ordered;
                return false;
            }
            k = nk as usize;
        }
        if k != 0 {
            self.ordered = ordered;
            return false;
        }
        self.ordered = std::mem::replace(&mut self.horizon, ordered);
        true
    }

    fn mask(&self, upto: usize) -> Vec<bool> {
        let mut mask = vec![false; upto];
        for face in self.faces.iter().filter(|f| f.alive) {
            for &v in &face.v {
                if (v as usize) < upto {
                    mask[v as usize] = true;
                }
            }
            let mut cur = face.coplanar;
            while cur != NONE {
                if (cur as usize) < upto {
                    mask[cur as usize] = true;
                }
                cur = self.next[cur as usize];
            }
        }
        mask
    }
}

fn edge_slot(v: &[u32; 3], a: u32, b: u32) -> Option<usize> {
    (0..3).find(|&k| v[k] == a && v[(k + 1) % 3] == b)
}

fn initial_simplex(pts: &[Vec3], eps: f64) -> Result<[u32; 4], Degenerate> {
    if pts.len() < 4 {
        return Err(match pts.len() {
            0 | 1 => Degenerate::Point,
            2 => Degenerate::Line,
            _ => Degenerate::Plane,
        });
    }
    let mut extremes = [0usize; 6];
    for (i, p) in pts.iter().enumerate() {
        for axis in 0..3 {
            if p[axis] < pts[extremes[2 * axis]][axis] {
                extremes[2 * axis] = i;
            }
            if p[axis] > pts[extremes[2 * axis + 1]][axis] {
                extremes[2 * axis + 1] = i;
            }
        }
    }
    let mut a = 0;
    let mut b = 0;
    let mut best = 0.0;
    for &i in &extremes {
        for &j in &extremes {
            let d = (pts[i] - pts[j]).norm_squared();
            if d > best {
                best = d;
                a = i;
                b = j;
            }
        }
    }
    if best.sqrt() <= eps {
        return Err(Degenerate::Point);
    }

    let dir = (pts[b] - pts[a]).normalize();
    let (c, dc) = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let w = p - pts[a];
            (i, (w - dir * w.dot(&dir)).norm())
        })
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if dc <= eps {
        return Err(Degenerate::Line);
    }

    let n = (pts[b] - pts[a]).cross(&(pts[c] - pts[a])).normalize();
    let (d, dd) = pts
        .iter()
        .enumerate()
        .map(|(i, p)| (i, n.dot(&(p - pts[a])).abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if dd <= eps {
        return Err(Degenerate::Plane);
    }
    Ok([a as u32, b as u32, c as u32, d as u32])
}

/// Vertices of a set with affine dimension below three. A flat hull has no
/// proper facets, so only points within `eps` of a lower-dimensional hull
/// vertex are reported.
fn degenerate_mask(pts: &[Vec3], eps: f64) -> Vec<bool> {
    let mut mask = vec![false; pts.len()];
    if pts.is_empty() {
        return mask;
    }
    let kind = match initial_simplex(pts, eps) {
        Ok(_) => unreachable!("caller checked degeneracy"),
        Err(kind) => kind,
    };
    let origin = pts[0];
    let (far, far_d) = pts
        .iter()
        .enumerate()
        .map(|(i, p)| (i, (p - origin).norm()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });

    if kind == Degenerate::Point || far_d <= eps {
        mask.iter_mut().for_each(|m| *m = true);
        return mask;
    }

    let u = (pts[far] - origin) / far_d;
    let in_plane_v = pts
        .iter()
        .map(|p| {
            let w = p - origin;
            w - u * w.dot(&u)
        })
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .filter(|w| w.norm() > eps);

    match (kind, in_plane_v) {
        (Degenerate::Line, _) | (_, None) => {
            let t: Vec<f64> = pts.iter().map(|p| (p - origin).dot(&u)).collect();
            let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for (m, &ti) in mask.iter_mut().zip(&t) {
                *m = ti - lo <= eps || hi - ti <= eps;
            }
        }
        (_, Some(w)) => {
            let v = w.normalize();
            let uv: Vec<(f64, f64)> = pts
                .iter()
                .map(|p| {
                    let w = p - origin;
                    (w.dot(&u), w.dot(&v))
                })
                .collect();
            let ring = monotone_chain(&uv);
            for (i, q) in uv.iter().enumerate() {
                mask[i] = ring.iter().any(|&a| {
                    let (dx, dy) = (uv[a].0 - q.0, uv[a].1 - q.1);
                    (dx * dx + dy * dy).sqrt() <= eps
                });
            }
        }
    }
    mask
}

fn monotone_chain(pts: &[(f64, f64)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a]
            .0
            .total_cmp(&pts[b].0)
            .then(pts[a].1.total_cmp(&pts[b].1))
    });
    let cross = |o: usize, a: usize, b: usize| {
        (pts[a].0 - pts[o].0) * (pts[b].1 - pts[o].1) - (pts[a].1 - pts[o].1) * (pts[b].0 - pts[o].0)
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0.0 {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    if hull.is_empty() {
        hull.push(idx[0]);
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_cloud(seed: u64, n: usize) -> Vec<Vec3> {
        let mut rng = crate::seed::rng(seed);
        (0..n)
            .map(|_| Vec3::new(rng.random(), rng.random(), rng.random()))
            .collect()
    }

    /// Brute force: a point is on the hull iff some plane through it has all
    /// other points on one side. For points in general position that is the
    /// case iff it belongs to a triangle whose plane supports the set.
    fn brute_force_vertices(pts: &[Vec3]) -> Vec<bool> {
        let n = pts.len();
        let mut mask = vec![false; n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let nrm = (pts[j] - pts[i]).cross(&(pts[k] - pts[i]));
                    let off = nrm.dot(&pts[i]);
                    let (mut pos, mut neg) = (false, false);
                    for (l, p) in pts.iter().enumerate() {
                        if l == i || l == j || l == k {
                            continue;
                        }
                        let d = nrm.dot(p) - off;
                        pos |= d > 0.0;
                        neg |= d < 0.0;
                    }
                    if !(pos && neg) {
                        mask[i] = true;
                        mask[j] = true;
                        mask[k] = true;
                    }
                }
            }
        }
        mask
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..30 {
            let pts = random_cloud(seed, 40);
            let eps = tolerance(&pts);
            assert_eq!(on_hull_mask(&pts, eps), brute_force_vertices(&pts), "seed {seed}");
        }
    }

    #[test]
    fn cube_with_interior_points() {
        let mut pts: Vec<Vec3> = (0..8)
            .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
            .collect();
        pts.extend(random_cloud(3, 200).into_iter().map(|p| p * 0.8 + Vec3::repeat(0.1)));
        let mask = on_hull_mask(&pts, 1e-9);
        assert!(mask[..8].iter().all(|&m| m));
        assert!(mask[8..].iter().all(|&m| !m));
    }

    #[test]
    fn face_points_count_as_on_hull() {
        let mut pts: Vec<Vec3> = (0..8)
            .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
            .collect();
        pts.push(Vec3::new(0.5, 0.5, 1.0));
        pts.push(Vec3::new(0.5, 0.5, 0.5));
        let mask = on_hull_mask(&pts, 1e-9);
        assert!(mask[8]);
        assert!(!mask[9]);
    }

    #[test]
    fn staged_matches_independent_builds() {
        for seed in 0..20 {
            let pts = random_cloud(seed, 300);
            let eps = tolerance(&pts);
            let staged = on_hull_mask_staged(&pts, 200, eps);
            assert_eq!(staged.first, on_hull_mask(&pts[..200], eps));
            assert_eq!(staged.full, on_hull_mask(&pts, eps));
        }
    }

    #[test]
    fn sphere_points_are_all_vertices() {
        let mut rng = crate::seed::rng(11);
        let pts: Vec<Vec3> = (0..2000).map(|_| crate::seed::unit_vector(&mut rng)).collect();
        let mask = on_hull_mask(&pts, 1e-12);
        assert!(mask.iter().all(|&m| m));
    }

    #[test]
    fn degenerate_inputs() {
        let line = vec![Vec3::zeros(), Vec3::new(0.0, 0.0, 398.0), Vec3::new(0.0, 0.0, 399.0)];
        assert_eq!(on_hull_mask(&line, 1e-9), vec![true, false, true]);

        let square = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.5, 0.5, 0.0),
            Vec3::new(0.5, 0.0, 0.0),
        ];
        assert_eq!(
            on_hull_mask(&square, 1e-9),
            vec![true, true, true, true, false, false]
        );

        assert_eq!(on_hull_mask(&[Vec3::zeros()], 1e-9), vec![true]);
        assert_eq!(on_hull_mask(&[Vec3::zeros(), Vec3::zeros()], 1e-9), vec![true, true]);
    }
}
