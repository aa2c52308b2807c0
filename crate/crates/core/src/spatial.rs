//! Spatial search utilities: a 3D kd-tree, closest point on a triangle,
//! and a quickhull convex hull.
//!
//! The kd-tree returns exact nearest neighbours (same floating-point
//! distance a brute-force scan would produce), which the metric suite
//! relies on when it cross-checks against quadratic oracles.

use nalgebra::{Point3, Vector3};

/// Squared Euclidean distance, written the same way everywhere so kd-tree
/// results are bitwise comparable with brute-force scans.
#[inline]
pub fn dist_sq(a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    dx * dx + dy * dy + dz * dz
}

/// Static kd-tree over a point set. Indices into the original slice are
/// preserved so callers can map hits back to their own data.
pub struct KdTree {
    points: Vec<Point3<f64>>,
    /// Point indices ordered by recursive median split.
    order: Vec<u32>,
}

impl KdTree {
    pub fn build(points: &[Point3<f64>]) -> Self {
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        let mut tree = KdTree {
            points: points.to_vec(),
            order,
        };
        // Recursive in-place median partition along the widest axis rule
        // (cycled axes keep construction cheap and balanced enough).
        order = std::mem::take(&mut tree.order);
        let len = order.len();
        if len > 0 {
            let pts = &tree.points;
            build_recursive(pts, &mut order, 0, len, 0);
        }
        tree.order = order;
        tree
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Exact nearest neighbour: `(index, squared distance)`.
    pub fn nearest(&self, q: &Point3<f64>) -> (usize, f64) {
        debug_assert!(!self.order.is_empty());
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(q, 0, self.order.len(), 0, &mut best);
        best
    }

    /// All indices with squared distance `<= r_sq` to `q`.
    pub fn within(&self, q: &Point3<f64>, r_sq: f64) -> Vec<usize> {
        let mut hits = Vec::new();
        self.range_search(q, 0, self.order.len(), 0, r_sq, &mut hits);
        hits
    }

    fn search(&self, q: &Point3<f64>, lo: usize, hi: usize, axis: usize, best: &mut (usize, f64)) {
        if lo >= hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let idx = self.order[mid] as usize;
        let d = dist_sq(q, &self.points[idx]);
        if d < best.1 {
            *best = (idx, d);
        }
        let split = self.points[idx][axis];
        let delta = q[axis] - split;
        let (near, far) = if delta <= 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(q, near.0, near.1, (axis + 1) % 3, best);
        if delta * delta < best.1 {
            self.search(q, far.0, far.1, (axis + 1) % 3, best);
        }
    }

    fn range_search(
        &self,
        q: &Point3<f64>,
        lo: usize,
        hi: usize,
        axis: usize,
        r_sq: f64,
        hits: &mut Vec<usize>,
    ) {
        if lo >= hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let idx = self.order[mid] as usize;
        if dist_sq(q, &self.points[idx]) <= r_sq {
            hits.push(idx);
        }
        let delta = q[axis] - self.points[idx][axis];
        let (near, far) = if delta <= 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.range_search(q, near.0, near.1, (axis + 1) % 3, r_sq, hits);
        if delta * delta <= r_sq {
            self.range_search(q, far.0, far.1, (axis + 1) % 3, r_sq, hits);
        }
    }
}

fn build_recursive(points: &[Point3<f64>], order: &mut [u32], lo: usize, hi: usize, axis: usize) {
    if hi - lo <= 1 {
        return;
    }
    let mid = (lo + hi) / 2;
    order[lo..hi].select_nth_unstable_by(mid - lo, |&a, &b| {
        points[a as usize][axis]
            .partial_cmp(&points[b as usize][axis])
            .unwrap()
    });
    build_recursive(points, order, lo, mid, (axis + 1) % 3);
    build_recursive(points, order, mid + 1, hi, (axis + 1) % 3);
}

/// Closest point on triangle `(a, b, c)` to `p`, plus its barycentric
/// coordinates `(u, v, w)` with respect to `(a, b, c)`.
pub fn closest_point_on_triangle(
    p: &Point3<f64>,
    a: &Point3<f64>,
    b: &Point3<f64>,
    c: &Point3<f64>,
) -> (Point3<f64>, [f64; 3]) {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (*a, [1.0, 0.0, 0.0]);
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (*b, [0.0, 1.0, 0.0]);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (a + ab * v, [1.0 - v, v, 0.0]);
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (*c, [0.0, 0.0, 1.0]);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (a + ac * w, [1.0 - w, 0.0, w]);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b + (c - b) * w, [0.0, 1.0 - w, w]);
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (a + ab * v + ac * w, [1.0 - v - w, v, w])
}

/// Indices of the convex hull vertices of `points` (quickhull).
///
/// Degenerate inputs (fewer than 4 points, or all coplanar) fall back to
/// returning every index, which is always a correct superset for diameter
/// queries.
pub fn convex_hull_vertices(points: &[Point3<f64>]) -> Vec<usize> {
    let n = points.len();
    let all: Vec<usize> = (0..n).collect();
    if n < 5 {
        return all;
    }

    let scale = bounding_diagonal(points).max(1.0);
    let eps = 1e-10 * scale;

    let Some(initial) = initial_tetrahedron(points, eps) else {
        return all;
    };

    #[derive(Clone)]
    struct Face {
        verts: [usize; 3],
        normal: Vector3<f64>,
        offset: f64,
        outside: Vec<usize>,
        alive: bool,
    }

    let make_face = |a: usize, b: usize, c: usize, interior: &Point3<f64>| -> Face {
        let mut normal = (points[b] - points[a]).cross(&(points[c] - points[a]));
        let mut verts = [a, b, c];
        if normal.dot(&(interior - points[a])) > 0.0 {
            verts.swap(1, 2);
            normal = -normal;
        }
        let normal = normal.normalize();
        let offset = normal.dot(&points[verts[0]].coords);
        Face {
            verts,
            normal,
            offset,
            outside: Vec::new(),
            alive: true,
        }
    };

    let [i0, i1, i2, i3] = initial;
    let interior = Point3::from(
        (points[i0].coords + points[i1].coords + points[i2].coords + points[i3].coords) / 4.0,
    );
    let mut faces = vec![
        make_face(i0, i1, i2, &interior),
        make_face(i0, i1, i3, &interior),
        make_face(i0, i2, i3, &interior),
        make_face(i1, i2, i3, &interior),
    ];

    let assign = |faces: &mut Vec<Face>, face_ids: &[usize], candidates: Vec<usize>| {
        for p in candidates {
            let mut best: Option<(usize, f64)> = None;
            for &f in face_ids {
                if !faces[f].alive {
                    continue;
                }
                let d = faces[f].normal.dot(&points[p].coords) - faces[f].offset;
                if d > eps && best.map(|(_, bd)| d > bd).unwrap_or(true) {
                    best = Some((f, d));
                }
            }
            if let Some((f, _)) = best {
                faces[f].outside.push(p);
            }
        }
    };

    let initial_ids: Vec<usize> = (0..4).collect();
    assign(&mut faces, &initial_ids, all);

    let mut pending: Vec<usize> = (0..4).collect();
    while let Some(fid) = pending.pop() {
        if !faces[fid].alive || faces[fid].outside.is_empty() {
            continue;
        }
        // Farthest outside point becomes a hull vertex.
        let apex = *faces[fid]
            .outside
            .iter()
            .max_by(|&&p, &&q| {
                let dp = faces[fid].normal.dot(&points[p].coords);
                let dq = faces[fid].normal.dot(&points[q].coords);
                dp.partial_cmp(&dq).unwrap()
            })
            .unwrap();
        let apex_pt = points[apex];

        // Collect every face visible from the apex.
        let mut visible = Vec::new();
        for (i, f) in faces.iter().enumerate() {
            if f.alive && f.normal.dot(&apex_pt.coords) - f.offset > eps {
                visible.push(i);
            }
        }
        // Horizon = edges of visible faces not shared with another visible face.
        let mut edge_count = std::collections::HashMap::new();
        for &f in &visible {
            let v = faces[f].verts;
            for e in [[v[0], v[1]], [v[1], v[2]], [v[2], v[0]]] {
                let key = (e[0].min(e[1]), e[0].max(e[1]));
                let entry = edge_count.entry(key).or_insert((0usize, e));
                entry.0 += 1;
                entry.1 = e;
            }
        }
        let mut orphans = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            orphans.append(&mut faces[f].outside);
        }
        orphans.retain(|&p| p != apex);

        let mut new_ids = Vec::new();
        for (_, (count, e)) in edge_count {
            if count == 1 {
                let face = make_face(e[0], e[1], apex, &interior);
                faces.push(face);
                new_ids.push(faces.len() - 1);
            }
        }
        assign(&mut faces, &new_ids, orphans);
        pending.extend(new_ids);
    }

    let mut on_hull = vec![false; n];
    for f in &faces {
        if f.alive {
            for &v in &f.verts {
                on_hull[v] = true;
            }
        }
    }
    (0..n).filter(|&i| on_hull[i]).collect()
}

fn bounding_diagonal(points: &[Point3<f64>]) -> f64 {
    let mut min = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut max = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        for k in 0..3 {
            min[k] = min[k].min(p[k]);
            max[k] = max[k].max(p[k]);
        }
    }
    (max - min).norm()
}

fn initial_tetrahedron(points: &[Point3<f64>], eps: f64) -> Option<[usize; 4]> {
    // Farthest pair among the six axis extremes.
    let mut extremes = Vec::new();
    for axis in 0..3 {
        let lo = (0..points.len())
            .min_by(|&a, &b| points[a][axis].partial_cmp(&points[b][axis]).unwrap())?;
        let hi = (0..points.len())
            .max_by(|&a, &b| points[a][axis].partial_cmp(&points[b][axis]).unwrap())?;
        extremes.push(lo);
        extremes.push(hi);
    }
    let mut best = (0, 1, 0.0);
    for i in 0..extremes.len() {
        for j in (i + 1)..extremes.len() {
            let d = dist_sq(&points[extremes[i]], &points[extremes[j]]);
            if d > best.2 {
                best = (extremes[i], extremes[j], d);
            }
        }
    }
    let (i0, i1, d) = best;
    if d <= eps * eps {
        return None;
    }
    let dir = (points[i1] - points[i0]).normalize();
    let i2 = (0..points.len()).max_by(|&a, &b| {
        let da = (points[a] - points[i0]).cross(&dir).norm_squared();
        let db = (points[b] - points[i0]).cross(&dir).norm_squared();
        da.partial_cmp(&db).unwrap()
    })?;
    if (points[i2] - points[i0]).cross(&dir).norm() <= eps {
        return None;
    }
    let normal = (points[i1] - points[i0])
        .cross(&(points[i2] - points[i0]))
        .normalize();
    let i3 = (0..points.len()).max_by(|&a, &b| {
        let da = normal.dot(&(points[a] - points[i0])).abs();
        let db = normal.dot(&(points[b] - points[i0])).abs();
        da.partial_cmp(&db).unwrap()
    })?;
    if normal.dot(&(points[i3] - points[i0])).abs() <= eps {
        return None;
    }
    Some([i0, i1, i2, i3])
}

/// Maximum pairwise distance in a point set.
///
/// Exact: sets above `hull_cutoff` points are first reduced to their convex
/// hull vertices, which preserves the diameter.
pub fn max_pairwise_distance(points: &[Point3<f64>], hull_cutoff: usize) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let reduced: Vec<Point3<f64>>;
    let pts = if points.len() > hull_cutoff {
        let hull = convex_hull_vertices(points);
        reduced = hull.into_iter().map(|i| points[i]).collect();
        &reduced[..]
    } else {
        points
    };
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            best = best.max(dist_sq(&pts[i], &pts[j]));
        }
    }
    best.sqrt()
}
