//! Zero level sets of a sampled scalar field by marching squares.

use std::collections::HashMap;

/// Samples of a scalar field on a rectilinear lattice.
///
/// Node `(i, j)` sits at `(x0 + i·dx, y0 + j·dy)`; values are stored with `i`
/// varying fastest.
#[derive(Debug, Clone)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        [self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy]
    }
}

// (vertical?, i, j): horizontal edges join (i,j)-(i+1,j), vertical ones (i,j)-(i,j+1)
type EdgeKey = (bool, usize, usize);

fn positive(v: f64) -> bool {
    v >= 0.0
}

/// Traces the zero set of `grid` into polylines of points.
///
/// Crossings are placed by linear interpolation along lattice edges; when
/// `refine` is given the crossing is then polished by bisection on it.
pub fn marching_squares(grid: &Grid, refine: Option<&(dyn Fn(f64, f64) -> f64 + Sync)>) -> Vec<Vec<[f64; 2]>> {
    if grid.nx < 2 || grid.ny < 2 {
        return Vec::new();
    }
    let mut crossing: HashMap<EdgeKey, [f64; 2]> = HashMap::new();
    let mut locate = |key: EdgeKey| -> [f64; 2] {
        *crossing.entry(key).or_insert_with(|| {
            let (vertical, i, j) = key;
            let (i2, j2) = if vertical { (i, j + 1) } else { (i + 1, j) };
            let (va, vb) = (grid.value(i, j), grid.value(i2, j2));
            let (pa, pb) = (grid.node(i, j), grid.node(i2, j2));
            let t = if va == vb { 0.5 } else { va / (va - vb) };
            let lerp = |t: f64| [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])];
            match refine {
                None => lerp(t),
                Some(f) => {
                    let (mut lo, mut hi) = (0.0, 1.0);
                    let s_lo = positive(f(pa[0], pa[1]));
                    if s_lo == positive(f(pb[0], pb[1])) {
                        return lerp(t);
                    }
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        let p = lerp(mid);
                        if positive(f(p[0], p[1])) == s_lo {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    lerp(0.5 * (lo + hi))
                }
            }
        })
    };

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            let v00 = grid.value(i, j);
            let v10 = grid.value(i + 1, j);
            let v11 = grid.value(i + 1, j + 1);
            let v01 = grid.value(i, j + 1);
            let bottom = (false, i, j);
            let top = (false, i, j + 1);
            let left = (true, i, j);
            let right = (true, i + 1, j);

            let mut cut = Vec::with_capacity(4);
            if positive(v00) != positive(v10) {
                cut.push(bottom);
            }
            if positive(v10) != positive(v11) {
                cut.push(right);
            }
            if positive(v11) != positive(v01) {
                cut.push(top);
            }
            if positive(v01) != positive(v00) {
                cut.push(left);
            }
            match cut.len() {
                2 => segments.push((cut[0], cut[1])),
                4 => {
                    let centre = 0.25 * (v00 + v10 + v11 + v01);
                    if positive(centre) == positive(v00) {
                        segments.push((bottom, right));
                        segments.push((top, left));
                    } else {
                        segments.push((bottom, left));
                        segments.push((right, top));
                    }
                }
                _ => {}
            }
        }
    }

    let mut incident: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(s);
        incident.entry(b).or_default().push(s);
    }

    let mut used = vec![false; segments.len()];
    let mut chains: Vec<Vec<EdgeKey>> = Vec::new();
    let walk = |start_seg: usize, start_key: EdgeKey, used: &mut Vec<bool>| -> Vec<EdgeKey> {
        let mut chain = vec![start_key];
        let mut seg = start_seg;
        let mut at = start_key;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            chain.push(next);
            at = next;
            match incident[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => break,
            }
        }
        chain
    };

    // open chains start at edges touched once, then closed loops
    let mut ends: Vec<(&EdgeKey, &Vec<usize>)> =
        incident.iter().filter(|(_, v)| v.len() == 1).collect();
    ends.sort_by_key(|(k, _)| **k);
    for (key, segs) in ends {
        if !used[segs[0]] {
            chains.push(walk(segs[0], *key, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            chains.push(walk(s, segments[s].0, &mut used));
        }
    }

    chains
        .into_iter()
        .map(|c| c.into_iter().map(&mut locate).collect())
        .collect()
}
