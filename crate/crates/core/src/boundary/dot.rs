use std::fmt::Write;

use super::BoundaryPoset;
use crate::subset::SimpleSubset;

fn node_id(e: SimpleSubset, full: SimpleSubset) -> String {
    if e == full {
        "interior".into()
    } else {
        format!("E{}", e.bits())
    }
}

/// Graphviz rendering. Edges point from a node to the nodes in its closure,
/// so the interior sits at the top.
pub fn to_dot(p: &BoundaryPoset) -> String {
    let full = p.interior.e;
    let mut s = String::new();
    writeln!(s, "digraph boundary {{").unwrap();
    writeln!(s, "  label=\"{} highest weight {}\";", p.system, p.highest).unwrap();
    writeln!(s, "  node [shape=box];").unwrap();
    writeln!(s, "  interior [label=\"E={} (interior)\\ndim {}\"];", full, p.interior.dim).unwrap();
    for n in &p.nodes {
        let dim = n.orbit_dim.map_or_else(|| "?".to_string(), |d| d.to_string());
        writeln!(
            s,
            "  {} [label=\"E={} E'={}\\ndim {}\"];",
            node_id(n.e, full),
            n.e,
            n.e_prime,
            dim
        )
        .unwrap();
    }
    for edge in &p.order {
        writeln!(s, "  {} -> {};", node_id(edge.upper, full), node_id(edge.lower, full)).unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::boundary_poset;
    use crate::rootsys::presets;
    use crate::WeightVector;

    #[test]
    fn dot_has_nodes_and_edges() {
        let rs = presets::sl_real(3).unwrap();
        let p = boundary_poset(&rs, &WeightVector::fundamental_ints(&[2, 0])).unwrap();
        let d = to_dot(&p);
        assert!(d.starts_with("digraph boundary {"));
        assert_eq!(d.matches("[label=").count(), 3);
        assert!(d.contains("interior -> E1;"));
        assert!(d.contains("E1 -> E0;"));
    }
}
