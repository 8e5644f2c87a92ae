use serde::Serialize;

use super::{verify_wdm_partition, LayerPartition};
use crate::error::{Result, WdmError};
use crate::graph::{Graph, Thresholds};

/// A subdivided star: `center` plus branches, each listed from the vertex
/// next to the center outward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Starlike {
    pub center: usize,
    pub branches: Vec<Vec<usize>>,
}

/// Builds `k = endpoints.len()` vertex-disjoint paths from `D_0` to the
/// given endpoints of layer `D_i`, one vertex per layer.
///
/// Paths are grown backward: at each layer the current heads are matched to
/// distinct neighbours one layer down. With `min τ >= k` every head has at
/// least `k` candidates, so a perfect matching always exists.
pub fn extract_disjoint_paths(
    g: &Graph,
    tau: &Thresholds,
    p: &LayerPartition,
    endpoints: &[usize],
) -> Result<Vec<Vec<usize>>> {
    verify_wdm_partition(g, tau, p).map_err(|d| WdmError::InvalidPartition(d.to_string()))?;
    let k = endpoints.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let min_tau = tau.min().unwrap_or(0) as usize;
    if k > min_tau {
        return Err(WdmError::Precondition(format!(
            "{k} paths requested but the minimum threshold is {min_tau}"
        )));
    }
    let labels = p.labels(g.n());
    let layer = labels[endpoints[0]];
    let mut sorted = endpoints.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return Err(WdmError::param("endpoints must be distinct"));
    }
    let Some(i) = layer.filter(|_| endpoints.iter().all(|&e| labels[e] == layer)) else {
        return Err(WdmError::param("endpoints must lie in one layer"));
    };

    let mut paths: Vec<Vec<usize>> = endpoints.iter().map(|&e| vec![e]).collect();
    let mut heads = endpoints.to_vec();
    for j in (1..=i).rev() {
        let below = p.layer(j - 1);
        let choice = match_into(g, &heads, below).ok_or_else(|| {
            WdmError::Precondition(format!("no distinct predecessors in layer {}", j - 1))
        })?;
        for (path, &u) in paths.iter_mut().zip(&choice) {
            path.push(u);
        }
        heads = choice;
    }
    for path in &mut paths {
        path.reverse();
    }
    Ok(paths)
}

// Kuhn's augmenting paths; returns the partner of each left vertex when a
// left-perfect matching exists.
fn match_into(g: &Graph, left: &[usize], right: &[usize]) -> Option<Vec<usize>> {
    let cand: Vec<Vec<usize>> = left
        .iter()
        .map(|&v| {
            right
                .iter()
                .enumerate()
                .filter(|&(_, &u)| g.has_edge(v, u))
                .map(|(r, _)| r)
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; right.len()];
    fn augment(
        l: usize,
        cand: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &r in &cand[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if owner[r].map_or(true, |o| augment(o, cand, owner, seen)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }
    for l in 0..left.len() {
        let mut seen = vec![false; right.len()];
        if !augment(l, &cand, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut out = vec![0; left.len()];
    for (r, o) in owner.iter().enumerate() {
        if let Some(l) = o {
            out[*l] = right[r];
        }
    }
    Some(out)
}

/// Checks that `paths` are pairwise vertex-disjoint paths of `g`, each
/// taking layers `0, 1, ..., i` in order and ending at the matching endpoint.
pub fn validate_disjoint_paths(
    g: &Graph,
    p: &LayerPartition,
    endpoints: &[usize],
    paths: &[Vec<usize>],
) -> std::result::Result<(), String> {
    if paths.len() != endpoints.len() {
        return Err(format!("{} paths for {} endpoints", paths.len(), endpoints.len()));
    }
    let labels = p.labels(g.n());
    let mut used = vec![false; g.n()];
    for (path, &end) in paths.iter().zip(endpoints) {
        if path.last() != Some(&end) {
            return Err(format!("path does not end at {end}"));
        }
        for (step, &v) in path.iter().enumerate() {
            if v >= g.n() {
                return Err(format!("vertex {v} out of range"));
            }
            if labels[v] != Some(step) {
                return Err(format!("vertex {v} is not in layer {step}"));
            }
            if std::mem::replace(&mut used[v], true) {
                return Err(format!("vertex {v} is shared by two paths"));
            }
        }
        if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(format!("{} and {} are not adjacent", w[0], w[1]));
        }
    }
    Ok(())
}

/// Starlike subtree with `k = min τ` branches: the center is a vertex of the
/// last layer, each branch descends from a distinct neighbour in the layer
/// before it down to `D_0`.
pub fn extract_starlike(g: &Graph, tau: &Thresholds, p: &LayerPartition) -> Result<Starlike> {
    verify_wdm_partition(g, tau, p).map_err(|d| WdmError::InvalidPartition(d.to_string()))?;
    let t = p.t();
    if t == 0 {
        return Err(WdmError::Precondition("processing time is 0".into()));
    }
    let k = tau.min().unwrap_or(0) as usize;
    if k < 2 {
        return Err(WdmError::Precondition(format!(
            "minimum threshold {k} is below 2"
        )));
    }
    let center = p.layer(t)[0];
    let labels = p.labels(g.n());
    let roots: Vec<usize> = g
        .neighbors(center)
        .iter()
        .copied()
        .filter(|&u| labels[u] == Some(t - 1))
        .take(k)
        .collect();
    let branches = extract_disjoint_paths(g, tau, p, &roots)?
        .into_iter()
        .map(|mut path| {
            path.reverse();
            path
        })
        .collect();
    Ok(Starlike { center, branches })
}

/// Checks that `s` is a subdivided star inside `g` with `k` branches of
/// `len` vertices each.
pub fn validate_starlike(
    g: &Graph,
    s: &Starlike,
    k: usize,
    len: usize,
) -> std::result::Result<(), String> {
    if s.branches.len() != k {
        return Err(format!("{} branches, expected {k}", s.branches.len()));
    }
    let mut used = vec![false; g.n()];
    used[s.center] = true;
    for b in &s.branches {
        if b.len() != len {
            return Err(format!("branch has {} vertices, expected {len}", b.len()));
        }
        if !g.has_edge(s.center, b[0]) {
            return Err(format!("branch root {} is not adjacent to the center", b[0]));
        }
        for &v in b {
            if std::mem::replace(&mut used[v], true) {
                return Err(format!("vertex {v} is used twice"));
            }
        }
        if let Some(w) = b.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(format!("{} and {} are not adjacent", w[0], w[1]));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{assign_threshold, build_cycle, cartesian_product, ThresholdMode};

    fn torus() -> (Graph, Thresholds, LayerPartition) {
        let c4 = build_cycle(4).unwrap();
        let g = cartesian_product(&c4, &c4).unwrap();
        let tau = assign_threshold(&g, ThresholdMode::Constant(3)).unwrap();
        let p = LayerPartition::new(vec![
            vec![2, 5, 7, 8, 13, 15],
            vec![1, 3, 4, 6, 9, 11, 12, 14],
            vec![0, 10],
        ]);
        (g, tau, p)
    }

    #[test]
    fn three_paths_of_length_one() {
        let (g, tau, p) = torus();
        let ends = [1, 3, 4];
        let paths = extract_disjoint_paths(&g, &tau, &p, &ends).unwrap();
        assert!(paths.iter().all(|q| q.len() == 2));
        assert_eq!(validate_disjoint_paths(&g, &p, &ends, &paths), Ok(()));
    }

    #[test]
    fn seed_endpoints_give_trivial_paths() {
        let (g, tau, p) = torus();
        let paths = extract_disjoint_paths(&g, &tau, &p, &[2, 5]).unwrap();
        assert_eq!(paths, vec![vec![2], vec![5]]);
    }

    #[test]
    fn too_many_paths_is_rejected() {
        let (g, tau, p) = torus();
        assert!(matches!(
            extract_disjoint_paths(&g, &tau, &p, &[1, 3, 4, 6]),
            Err(WdmError::Precondition(_))
        ));
    }

    #[test]
    fn starlike_on_torus() {
        let (g, tau, p) = torus();
        let s = extract_starlike(&g, &tau, &p).unwrap();
        assert_eq!(s.center, 0);
        assert_eq!(validate_starlike(&g, &s, 3, 2), Ok(()));
    }

    #[test]
    fn validator_catches_shared_vertices() {
        let (g, _, p) = torus();
        let bad = vec![vec![5, 1], vec![5, 4]];
        assert!(validate_disjoint_paths(&g, &p, &[1, 4], &bad).is_err());
    }
}
