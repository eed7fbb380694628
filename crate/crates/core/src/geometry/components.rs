use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::domain::Domain;
use super::sampling::sample_near;
use crate::cvec::{c, dist, norm, to_real, Point, C64};
use crate::error::{LabError, Result};

/// How the node set of a component map is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum GraphSpec {
    /// Pixel grid of spacing `h` with 4-neighbour adjacency (n = 1).
    Grid { h: f64 },
    /// ε-graph on uniform samples, ε = `eps_factor` × mean nearest-neighbour spacing.
    Samples { count: usize, eps_factor: f64 },
}

/// Connectivity structure of B(w, δ) ∩ Ω.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentMap {
    pub center: Point,
    pub radius: f64,
    pub spec: GraphSpec,
    /// Grid spacing, or mean nearest-neighbour spacing for the ε-graph.
    pub spacing: f64,
    /// Adjacency radius of the ε-graph (equals `spacing` for grids).
    pub eps: f64,
    pub nodes: Vec<Point>,
    pub labels: Vec<usize>,
    pub component_sizes: Vec<usize>,
    pub representatives: Vec<Point>,
    pub distinguished: usize,
    #[serde(skip)]
    adjacency: Vec<Vec<u32>>,
}

impl ComponentMap {
    pub fn component_count(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    pub fn nodes_of(&self, label: usize) -> impl Iterator<Item = (usize, &Point)> {
        self.nodes.iter().enumerate().filter(move |(i, _)| self.labels[*i] == label)
    }

    /// Node of component `label` closest to `z`.
    pub fn nearest_in(&self, label: usize, z: &[C64]) -> Option<(usize, f64)> {
        self.nodes_of(label)
            .map(|(i, p)| (i, dist(p, z)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }

    /// Reach tolerance for "target lies on the closure of a component".
    pub fn reach(&self) -> f64 {
        2.0 * self.spacing.max(self.eps / 4.0)
    }

    /// Breadth-first path of node indices from `from` to `to`.
    pub fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(i) = queue.pop_front() {
            if i == to {
                let mut out = vec![to];
                let mut j = to;
                while j != from {
                    j = prev[j];
                    out.push(j);
                }
                out.reverse();
                return Some(out);
            }
            for &nb in &self.adjacency[i] {
                let nb = nb as usize;
                if prev[nb] == usize::MAX {
                    prev[nb] = i;
                    queue.push_back(nb);
                }
            }
        }
        None
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(&(j as u32))
    }
}

fn label_components(adjacency: &[Vec<u32>]) -> (Vec<usize>, Vec<usize>) {
    let mut labels = vec![usize::MAX; adjacency.len()];
    let mut sizes = Vec::new();
    for s in 0..adjacency.len() {
        if labels[s] != usize::MAX {
            continue;
        }
        let l = sizes.len();
        let mut size = 0;
        let mut queue = VecDeque::from([s]);
        labels[s] = l;
        while let Some(i) = queue.pop_front() {
            size += 1;
            for &nb in &adjacency[i] {
                if labels[nb as usize] == usize::MAX {
                    labels[nb as usize] = l;
                    queue.push_back(nb as usize);
                }
            }
        }
        sizes.push(size);
    }
    (labels, sizes)
}

fn grid_nodes(domain: &Domain, w: &[C64], delta: f64, h: f64) -> Result<(Vec<Point>, Vec<Vec<u32>>)> {
    let m = (2.0 * delta / h).ceil() as usize;
    if (m as f64).powi(2) > 1e8 {
        return Err(LabError::Input(format!("grid of {m}x{m} cells exceeds 1e8")));
    }
    let w0 = w[0];
    let origin = w0 - c(delta, delta);
    let mut index = vec![u32::MAX; m * m];
    let mut nodes = Vec::new();
    for iy in 0..m {
        for ix in 0..m {
            let z = origin + c((ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h);
            if (z - w0).norm() < delta && domain.contains(&[z]) {
                index[iy * m + ix] = nodes.len() as u32;
                nodes.push(vec![z]);
            }
        }
    }
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for iy in 0..m {
        for ix in 0..m {
            let a = index[iy * m + ix];
            if a == u32::MAX {
                continue;
            }
            if ix + 1 < m && index[iy * m + ix + 1] != u32::MAX {
                let b = index[iy * m + ix + 1];
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
            }
            if iy + 1 < m && index[(iy + 1) * m + ix] != u32::MAX {
                let b = index[(iy + 1) * m + ix];
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
            }
        }
    }
    Ok((nodes, adjacency))
}

type CellKey = Vec<i64>;

fn cell_of(x: &[f64], size: f64) -> CellKey {
    x.iter().map(|v| (v / size).floor() as i64).collect()
}

fn neighbor_cells(key: &CellKey) -> Vec<CellKey> {
    let d = key.len();
    let total = 3usize.pow(d as u32);
    (0..total)
        .map(|mut code| {
            key.iter()
                .map(|k| {
                    let off = (code % 3) as i64 - 1;
                    code /= 3;
                    k + off
                })
                .collect()
        })
        .collect()
}

fn hash_points(xs: &[Vec<f64>], size: f64) -> HashMap<CellKey, Vec<u32>> {
    let mut map: HashMap<CellKey, Vec<u32>> = HashMap::new();
    for (i, x) in xs.iter().enumerate() {
        map.entry(cell_of(x, size)).or_default().push(i as u32);
    }
    map
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn eps_graph(xs: &[Vec<f64>], eps: f64) -> Vec<Vec<u32>> {
    let map = hash_points(xs, eps);
    let mut adjacency = vec![Vec::new(); xs.len()];
    for (i, x) in xs.iter().enumerate() {
        for key in neighbor_cells(&cell_of(x, eps)) {
            if let Some(bucket) = map.get(&key) {
                for &j in bucket {
                    if j as usize != i && sq(x, &xs[j as usize]) < eps * eps {
                        adjacency[i].push(j);
                    }
                }
            }
        }
        adjacency[i].sort_unstable();
    }
    adjacency
}

fn mean_nn_spacing(xs: &[Vec<f64>], guess: f64) -> f64 {
    let size = 2.0 * guess;
    let map = hash_points(xs, size);
    let total: f64 = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut best = size * size;
            for key in neighbor_cells(&cell_of(x, size)) {
                if let Some(bucket) = map.get(&key) {
                    for &j in bucket {
                        if j as usize != i {
                            best = best.min(sq(x, &xs[j as usize]));
                        }
                    }
                }
            }
            best.sqrt()
        })
        .sum();
    total / xs.len() as f64
}

/// Connected components of B(w, δ) ∩ Ω. `inner` is the ball b defining the
/// distinguished component E(B, b); by default the node nearest to `w`.
pub fn connected_components(
    domain: &Domain,
    w: &[C64],
    delta: f64,
    spec: GraphSpec,
    inner: Option<(&[C64], f64)>,
    seed: u64,
) -> Result<ComponentMap> {
    if delta <= 0.0 {
        return Err(LabError::Input("delta must be positive".into()));
    }
    let (nodes, adjacency, spacing, eps) = match spec {
        GraphSpec::Grid { h } => {
            if domain.n != 1 {
                return Err(LabError::Input("grid components need n = 1; use the sample graph".into()));
            }
            let (nodes, adj) = grid_nodes(domain, w, delta, h)?;
            (nodes, adj, h, h)
        }
        GraphSpec::Samples { count, eps_factor } => {
            if count < 10_000 || eps_factor < 4.0 {
                return Err(LabError::Input("sample graph needs >= 1e4 samples and eps factor >= 4".into()));
            }
            let s = sample_near(domain, &to_real(w), delta, count, seed)?;
            let xs: Vec<Vec<f64>> = s.points.iter().map(|p| to_real(p)).collect();
            let dim = domain.real_dim() as f64;
            let guess = (s.volume / count as f64).powf(1.0 / dim);
            let spacing = mean_nn_spacing(&xs, guess);
            let eps = eps_factor * spacing;
            let adj = eps_graph(&xs, eps);
            (s.points, adj, spacing, eps)
        }
    };
    if nodes.is_empty() {
        return Err(LabError::EmptyIntersection { proposals: 0 });
    }
    let (labels, sizes) = label_components(&adjacency);
    let mut representatives = vec![Vec::new(); sizes.len()];
    for (i, l) in labels.iter().enumerate() {
        if representatives[*l].is_empty() {
            representatives[*l] = nodes[i].clone();
        }
    }
    let (bc, br) = match inner {
        Some((p, r)) => (p.to_vec(), r),
        None => (w.to_vec(), 0.0),
    };
    let mut votes = vec![0usize; sizes.len()];
    for (i, p) in nodes.iter().enumerate() {
        if dist(p, &bc) < br {
            votes[labels[i]] += 1;
        }
    }
    let distinguished = if votes.iter().any(|v| *v > 0) {
        (0..votes.len()).max_by_key(|l| (votes[*l], usize::MAX - l)).unwrap()
    } else {
        let i = (0..nodes.len())
            .min_by(|a, b| dist(&nodes[*a], &bc).partial_cmp(&dist(&nodes[*b], &bc)).unwrap())
            .unwrap();
        labels[i]
    };
    Ok(ComponentMap {
        center: w.to_vec(),
        radius: delta,
        spec,
        spacing,
        eps,
        nodes,
        labels,
        component_sizes: sizes,
        representatives,
        distinguished,
        adjacency,
    })
}

/// Points of the distinguished component approaching `target`: strictly
/// decreasing distances, consecutive points adjacent in the graph.
pub fn approach_sequence(map: &ComponentMap, target: &[C64], length: usize) -> Result<Vec<Point>> {
    let (start, d0) = map
        .nearest_in(map.distinguished, target)
        .ok_or(LabError::UnreachableBoundaryPoint)?;
    if d0 > map.reach() {
        return Err(LabError::UnreachableBoundaryPoint);
    }
    let mut path = vec![start];
    let mut current = start;
    let mut dcur = d0;
    while path.len() < length.max(1) {
        let next = map.adjacency[current]
            .iter()
            .map(|&j| (j as usize, dist(&map.nodes[j as usize], target)))
            .filter(|(_, d)| *d > dcur)
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        match next {
            Some((j, d)) => {
                path.push(j);
                current = j;
                dcur = d;
            }
            None => break,
        }
    }
    path.reverse();
    Ok(path.into_iter().map(|i| map.nodes[i].clone()).collect())
}

/// An approach point z = base + e^{log_scale}·dir, kept in this form so
/// distances far below `f64` resolution can be represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub base: Point,
    pub log_scale: f64,
    pub dir: Point,
}

impl Probe {
    pub fn at(z: &[C64]) -> Probe {
        Probe { base: z.to_vec(), log_scale: f64::NEG_INFINITY, dir: vec![c(0.0, 0.0); z.len()] }
    }

    /// Nearest `f64` point.
    pub fn point(&self) -> Point {
        let t = self.log_scale.exp();
        self.base.iter().zip(&self.dir).map(|(b, d)| b + d * t).collect()
    }

    /// Whether the rounded point reproduces the offset t·dir to 10⁻⁶
    /// relative accuracy.
    pub fn representable(&self) -> bool {
        let t = self.log_scale.exp();
        if t <= 1e-15 * norm(&self.base).max(1e-300) {
            return false;
        }
        let err: f64 = self
            .point()
            .iter()
            .zip(&self.base)
            .zip(&self.dir)
            .map(|((p, b), d)| (p - b - d * t).norm_sqr())
            .sum();
        err.sqrt() <= 1e-6 * t * norm(&self.dir)
    }
}

/// Extends an approach toward `target` past the last node `from` along the
/// ray target → from, with log-distances spaced geometrically down to
/// `min_log_scale`. Membership is checked wherever the probe point is
/// representable; the sequence stops at the first failure.
pub fn refine_probes(domain: &Domain, target: &[C64], from: &[C64], count: usize, min_log_scale: f64) -> Vec<Probe> {
    let d0 = dist(target, from);
    if d0 == 0.0 {
        return Vec::new();
    }
    let dir: Point = from.iter().zip(target).map(|(f, t)| (f - t) / d0).collect();
    let a = (-d0.ln()).max(0.1);
    let b = (-min_log_scale).max(a * 1.01);
    let mut out = Vec::with_capacity(count);
    for i in 1..=count {
        let u = a * (b / a).powf(i as f64 / count as f64);
        let p = Probe { base: target.to_vec(), log_scale: -u, dir: dir.clone() };
        if p.representable() && !domain.contains(&p.point()) {
            break;
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainFamily;

    #[test]
    fn disk_near_boundary_is_one_component() {
        let d = Domain::unit_disk();
        let m = connected_components(&d, &[c(1.0, 0.0)], 0.5, GraphSpec::Grid { h: 0.01 }, None, 0).unwrap();
        assert_eq!(m.component_count(), 1);
        assert!(m.nodes.iter().all(|p| d.contains(p) && dist(p, &[c(1.0, 0.0)]) < 0.5));
    }

    #[test]
    fn two_disks_give_two_components() {
        let d = Domain::new(DomainFamily::DiskUnion {
            disks: vec![(c(0.0, 0.0), 1.0), (c(2.5, 0.0), 1.0)],
        })
        .unwrap();
        let m = connected_components(&d, &[c(1.0, 0.0)], 2.0, GraphSpec::Grid { h: 0.01 }, None, 0).unwrap();
        assert_eq!(m.component_count(), 2);
    }

    #[test]
    fn labels_are_consistent_with_adjacency() {
        let d = Domain::new(DomainFamily::Horseshoe { inner: 0.5, outer: 1.0, gap: 0.3 }).unwrap();
        let w = [C64::from_polar(0.75, std::f64::consts::PI - 0.3)];
        let m = connected_components(&d, &w, 0.6, GraphSpec::Grid { h: 0.01 }, None, 0).unwrap();
        assert_eq!(m.component_count(), 2);
        for i in 0..m.nodes.len() {
            for &j in m.neighbors(i) {
                assert_eq!(m.labels[i], m.labels[j as usize]);
            }
        }
    }

    #[test]
    fn approach_is_monotone_and_adjacent() {
        let d = Domain::unit_disk();
        let t = [c(1.0, 0.0)];
        let m = connected_components(&d, &t, 0.5, GraphSpec::Grid { h: 0.01 }, None, 0).unwrap();
        let seq = approach_sequence(&m, &t, 20).unwrap();
        assert_eq!(seq.len(), 20);
        for w in seq.windows(2) {
            assert!(dist(&w[1], &t) < dist(&w[0], &t));
        }
        assert!(dist(seq.last().unwrap(), &t) <= 2.0 * m.spacing);
    }

    #[test]
    fn ball_sample_graph_is_connected_near_boundary() {
        let d = Domain::unit_ball(2);
        let w = [c(1.0, 0.0), c(0.0, 0.0)];
        let m = connected_components(&d, &w, 0.5, GraphSpec::Samples { count: 10_000, eps_factor: 4.0 }, None, 5)
            .unwrap();
        assert_eq!(m.component_count(), 1);
    }

    #[test]
    fn probes_descend_inside_disk() {
        let d = Domain::unit_disk();
        let p = refine_probes(&d, &[c(1.0, 0.0)], &[c(0.99, 0.0)], 40, -1e6);
        assert_eq!(p.len(), 40);
        assert!(p.windows(2).all(|w| w[1].log_scale < w[0].log_scale));
        assert!((p.last().unwrap().log_scale + 1e6).abs() < 1e-6);
    }
}
