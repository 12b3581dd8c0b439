use std::fmt::Write;

use serde_json::{json, Value};

use super::{Atlas, GraphKind, Provenance};
use crate::wall_crossing::MoveKind;

/// `{kind, vertices: [{i, j, special, m_plus0, m_minus, r, d, type}], edges: [{from, to, move, provenance}]}`,
/// plus `k3_real_locus` and `k3_l_plus` for the K3 graph.
pub fn to_json(a: &Atlas) -> Value {
    let vertices: Vec<Value> = a
        .vertices
        .iter()
        .map(|v| {
            json!({
                "i": v.id.i,
                "j": v.id.j,
                "special": v.id.special,
                "m_plus0": v.m_plus0.to_string(),
                "m_minus": v.m_minus.to_string(),
                "r": v.r,
                "d": v.d,
                "type": v.vertex_type.to_string(),
            })
        })
        .collect();
    let edges: Vec<Value> = a
        .edges
        .iter()
        .map(|e| {
            json!({
                "from": e.from.to_string(),
                "to": e.to.to_string(),
                "move": e.kind.to_string(),
                "provenance": match e.provenance {
                    Provenance::Asserted => "asserted",
                    Provenance::GridInferred => "grid-inferred",
                },
                "note": e.note,
            })
        })
        .collect();
    let mut out = json!({
        "kind": a.kind.to_string(),
        "vertices": vertices,
        "edges": edges,
    });
    if a.kind == GraphKind::K3 {
        let loci: serde_json::Map<String, Value> = a
            .k3_real_locus
            .iter()
            .map(|(id, s)| {
                (
                    id.to_string(),
                    json!({ "surface": s.to_string(), "genera": s.genera }),
                )
            })
            .collect();
        let l_plus: serde_json::Map<String, Value> = a
            .k3_l_plus
            .iter()
            .map(|(id, e)| (id.to_string(), Value::String(e.to_string())))
            .collect();
        out["k3_real_locus"] = Value::Object(loci);
        out["k3_l_plus"] = Value::Object(l_plus);
    }
    out
}

/// Graphviz digraph; edges point towards smaller `d`, L solid and R dashed.
pub fn to_dot(a: &Atlas) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {} {{", a.kind).unwrap();
    writeln!(s, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for v in &a.vertices {
        let mut label = format!(
            "{}\\n(r,d)=({},{})\\ntype {}",
            v.id, v.r, v.d, v.vertex_type
        );
        if let Some(surface) = a.k3_real_locus.get(&v.id) {
            write!(label, "\\nK3: {surface}").unwrap();
        }
        writeln!(s, "  {} [label=\"{}\"];", v.id.dot_id(), label).unwrap();
    }
    for e in &a.edges {
        let style = match e.kind {
            MoveKind::L | MoveKind::LInverse => "solid",
            MoveKind::R | MoveKind::RInverse => "dashed",
        };
        let mut attrs = format!("label=\"{}\", style={style}", e.kind);
        if e.provenance == Provenance::GridInferred {
            attrs.push_str(", color=gray");
        }
        writeln!(s, "  {} -> {} [{attrs}];", e.from.dot_id(), e.to.dot_id()).unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::build_atlas;

    #[test]
    fn json_shape() {
        let v = to_json(&build_atlas(GraphKind::K4));
        assert_eq!(v["kind"], "K4");
        assert_eq!(v["vertices"].as_array().unwrap().len(), 75);
        let first = &v["vertices"][0];
        assert_eq!(first["m_minus"], "<-2>+10*A1");
        assert_eq!(first["type"], "II");
        assert!(v.get("k3_real_locus").is_none());
        let k3 = to_json(&build_atlas(GraphKind::K3));
        assert_eq!(k3["k3_real_locus"]["C10,1"]["surface"], "S10 ⊔ S2");
        assert_eq!(k3["k3_l_plus"]["C10,1"], "U");
    }

    #[test]
    fn dot_shape() {
        let a = build_atlas(GraphKind::K4);
        let dot = to_dot(&a);
        let nodes = dot.lines().filter(|l| l.contains("[label=\"C")).count();
        assert_eq!(nodes, 75);
        assert!(dot.contains("C0_0 -> C1_0_I [label=\"L\", style=solid]"));
        assert!(dot.contains("C10_0 -> C10_1 [label=\"R\", style=dashed]"));
        let edges = dot.lines().filter(|l| l.contains(" -> ")).count();
        assert_eq!(edges, a.edges.len());
    }
}
