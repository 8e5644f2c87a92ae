use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Result, WdmError};

/// Cycle `C_n` on vertices `0..n`, vertex `i` adjacent to `i ± 1 mod n`.
pub fn build_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(WdmError::param(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Complete graph `K_n`.
pub fn build_complete(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(WdmError::param("complete graph needs n >= 1"));
    }
    Graph::from_edges(
        n,
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
    )
}

/// Path on `n` vertices `0 - 1 - ... - (n-1)`.
pub fn build_path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(WdmError::param("path needs n >= 1"));
    }
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

/// Star `K_{1,k}`: center 0, leaves `1..=k`.
pub fn build_star(k: usize) -> Result<Graph> {
    Graph::from_edges(k + 1, (1..=k).map(|i| (0, i)))
}

pub fn edgeless(n: usize) -> Graph {
    Graph::empty(n)
}

/// The Petersen graph: outer 5-cycle `0..5`, spokes `i - (i+5)`, inner
/// pentagram on `5..10`.
pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges).expect("petersen edges are simple")
}

/// Join `g ∨ h`: vertices of `g` keep their ids, vertex `x` of `h` becomes
/// `g.n() + x`, and every `g` vertex is joined to every `h` vertex.
pub fn join(g: &Graph, h: &Graph) -> Result<Graph> {
    if g.n() == 0 || h.n() == 0 {
        return Err(WdmError::param("join operands must be nonempty"));
    }
    let off = g.n();
    let edges = g
        .edges()
        .chain(h.edges().map(|(a, b)| (a + off, b + off)))
        .chain((0..g.n()).flat_map(|a| (0..h.n()).map(move |x| (a, x + off))));
    Graph::from_edges(g.n() + h.n(), edges)
}

/// Cartesian product `g □ h`; vertex `(a, x)` has id `a * h.n() + x`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    if g.n() == 0 || h.n() == 0 {
        return Err(WdmError::param("product operands must be nonempty"));
    }
    let m = h.n();
    let id = |a: usize, x: usize| a * m + x;
    let mut edges = Vec::with_capacity(g.n() * h.m() + h.n() * g.m());
    for a in 0..g.n() {
        for (x, y) in h.edges() {
            edges.push((id(a, x), id(a, y)));
        }
    }
    for x in 0..m {
        for (a, b) in g.edges() {
            edges.push((id(a, x), id(b, x)));
        }
    }
    Graph::from_edges(g.n() * m, edges)
}

/// `C_n` with every vertex blown up into an independent pair: pair `i` is
/// `{2i, 2i+1}` and consecutive pairs are completely joined.
pub fn blowup_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(WdmError::param(format!("blow-up needs n >= 3, got {n}")));
    }
    let mut edges = Vec::with_capacity(4 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        for a in [2 * i, 2 * i + 1] {
            for b in [2 * j, 2 * j + 1] {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(2 * n, edges)
}

/// Erdős–Rényi sample `G(n, p)`, deterministic for a fixed seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(WdmError::param(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::even_girth;

    #[test]
    fn cycles() {
        let c3 = build_cycle(3).unwrap();
        assert_eq!(c3.m(), 3);
        let c5 = build_cycle(5).unwrap();
        assert_eq!(c5.regular_degree(), Some(2));
        assert_eq!(even_girth(&build_cycle(8).unwrap()), Some(8));
        assert!(build_cycle(2).is_err());
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(build_complete(1).unwrap().m(), 0);
        assert_eq!(build_complete(2).unwrap().m(), 1);
        let k4 = build_complete(4).unwrap();
        assert_eq!(k4.m(), 6);
        assert_eq!(k4.regular_degree(), Some(3));
        assert!(build_complete(0).is_err());
    }

    #[test]
    fn joins() {
        let k1 = build_complete(1).unwrap();
        let wheel = join(&k1, &build_cycle(4).unwrap()).unwrap();
        assert_eq!(wheel.n(), 5);
        assert_eq!(wheel.m(), 8);

        let w9 = join(&k1, &build_cycle(9).unwrap()).unwrap();
        assert_eq!(w9.degree(0), 9);
        assert!((1..10).all(|v| w9.degree(v) == 3));

        let k2 = build_complete(2).unwrap();
        assert_eq!(join(&k2, &k2).unwrap(), build_complete(4).unwrap());
    }

    #[test]
    fn products() {
        let c4 = build_cycle(4).unwrap();
        let t = cartesian_product(&c4, &c4).unwrap();
        assert_eq!((t.n(), t.m()), (16, 32));
        assert_eq!(t.regular_degree(), Some(4));

        let k2 = build_complete(2).unwrap();
        let sq = cartesian_product(&k2, &k2).unwrap();
        assert_eq!(sq.regular_degree(), Some(2));
        assert_eq!(sq.m(), 4);
        assert!(sq.is_connected());

        let c3 = build_cycle(3).unwrap();
        let t33 = cartesian_product(&c3, &c3).unwrap();
        assert_eq!(t33.n(), 9);
        assert_eq!(t33.regular_degree(), Some(4));
        // a triangle inside one fibre
        assert!(t33.has_edge(0, 1) && t33.has_edge(1, 2) && t33.has_edge(0, 2));
    }

    #[test]
    fn blowups() {
        let h3 = blowup_cycle(3).unwrap();
        assert_eq!((h3.n(), h3.m()), (6, 12));
        assert_eq!(h3.regular_degree(), Some(4));
        let h5 = blowup_cycle(5).unwrap();
        assert_eq!((h5.n(), h5.m()), (10, 20));
        let h4 = blowup_cycle(4).unwrap();
        assert!((0..4).all(|i| !h4.has_edge(2 * i, 2 * i + 1)));
    }

    #[test]
    fn random_graphs() {
        assert_eq!(random_graph(5, 0.0, 3).unwrap().m(), 0);
        assert_eq!(random_graph(5, 1.0, 3).unwrap(), build_complete(5).unwrap());
        assert_eq!(
            random_graph(10, 0.3, 7).unwrap(),
            random_graph(10, 0.3, 7).unwrap()
        );
        assert!(random_graph(4, 1.5, 0).is_err());
    }

    #[test]
    fn petersen_is_cubic() {
        let p = petersen();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert_eq!(p.regular_degree(), Some(3));
        assert!(p.is_connected());
    }
}
