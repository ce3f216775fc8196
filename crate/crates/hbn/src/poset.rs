//! Hasse diagrams of downward closures in the dominance order, rendered as
//! DOT digraphs. Edges point from the smaller (more degenerate) type up to
//! the covering type.

use crate::splitting::SplittingType;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetNode {
    pub e: SplittingType,
    pub u: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDiagram {
    pub nodes: Vec<PosetNode>,
    /// (lower, upper) index pairs: covering relations of the dominance order.
    pub edges: Vec<(usize, usize)>,
}

/// Downward closure of root truncated at u_max, with covering relations
/// computed by transitive reduction.
pub fn hasse_diagram(root: &SplittingType, u_max: i64) -> HasseDiagram {
    let closure: Vec<SplittingType> = root.downward_closure(u_max).into_iter().collect();
    let n = closure.len();
    let mut le = vec![vec![false; n]; n];
    for (i, a) in closure.iter().enumerate() {
        for (j, b) in closure.iter().enumerate() {
            le[i][j] = a.leq(b).expect("closure members are comparable in context");
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !le[i][j] {
                continue;
            }
            // strict relation; keep only covers
            let covered = (0..n).any(|w| w != i && w != j && le[i][w] && le[w][j]);
            if !covered {
                edges.push((i, j));
            }
        }
    }
    let nodes = closure.into_iter().map(|e| PosetNode { u: e.u_invariant(), e }).collect();
    HasseDiagram { nodes, edges }
}

impl HasseDiagram {
    /// DOT rendering; when a genus is supplied each node also shows the
    /// expected stratum dimension g - u.
    pub fn to_dot(&self, genus: Option<i64>) -> String {
        let mut out = String::from("digraph splitting_poset {\n  rankdir=BT;\n  node [shape=box];\n");
        for node in &self.nodes {
            let dim_label = match genus {
                Some(g) => match node.e.expected_dim(g) {
                    Some(dim) => format!("\\ndim {dim}"),
                    None => "\\nempty".to_string(),
                },
                None => String::new(),
            };
            out.push_str(&format!("  \"{}\" [label=\"{}\\nu {}{}\"];\n", node.e, node.e, node.u, dim_label));
        }
        for &(lo, hi) in &self.edges {
            out.push_str(&format!("  \"{}\" -> \"{}\";\n", self.nodes[lo].e, self.nodes[hi].e));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(values: &[i64]) -> SplittingType {
        SplittingType::new(values.to_vec()).unwrap()
    }

    #[test]
    fn two_node_chain() {
        let diagram = hasse_diagram(&st(&[0, 0]), 1);
        assert_eq!(diagram.nodes.len(), 2);
        assert_eq!(diagram.edges.len(), 1);
        let (lo, hi) = diagram.edges[0];
        assert_eq!(diagram.nodes[lo].e, st(&[-1, 1]));
        assert_eq!(diagram.nodes[hi].e, st(&[0, 0]));
    }

    #[test]
    fn singleton() {
        let diagram = hasse_diagram(&st(&[0]), 3);
        assert_eq!(diagram.nodes.len(), 1);
        assert!(diagram.edges.is_empty());

        let diagram = hasse_diagram(&st(&[0, 0]), 0);
        assert_eq!(diagram.nodes.len(), 1);
        assert!(diagram.edges.is_empty());
    }

    #[test]
    fn transitive_reduction_drops_long_edges() {
        // chain (0,0) > (-1,1) > (-2,2): no direct edge from (-2,2) to (0,0)
        let diagram = hasse_diagram(&st(&[0, 0]), 3);
        assert_eq!(diagram.nodes.len(), 3);
        assert_eq!(diagram.edges.len(), 2);
    }

    #[test]
    fn dot_output_parses_visually() {
        let dot = hasse_diagram(&st(&[0, 0]), 1).to_dot(Some(3));
        assert!(dot.starts_with("digraph splitting_poset {"));
        assert!(dot.contains("\"(-1,1)\" -> \"(0,0)\""));
        assert!(dot.contains("dim 2"));
        assert!(dot.trim_end().ends_with('}'));
    }
}
