use std::fmt::Write;

use multiforest::model::MultitypeForest;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78",
];

/// One compact JSON object per line.
pub fn json_line(f: &MultitypeForest) -> String {
    let mut s = serde_json::to_string(&f.to_json_value()).expect("forest serializes");
    s.push('\n');
    s
}

/// A `digraph` with vertices filled by type (types beyond 12 reuse the
/// palette) and roots drawn as double circles.
pub fn dot(f: &MultitypeForest, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {} {{", name).unwrap();
    writeln!(s, "  node [style=filled, shape=circle];").unwrap();
    for v in 0..f.len() {
        let ty = f.ty(v);
        let shape = if f.parent(v).is_none() { ", shape=doublecircle" } else { "" };
        writeln!(
            s,
            "  v{} [label=\"{}\", fillcolor=\"{}\", tooltip=\"type {}\"{}];",
            v,
            v,
            PALETTE[ty % PALETTE.len()],
            ty + 1,
            shape
        )
        .unwrap();
    }
    for v in 0..f.len() {
        for &c in f.children(v) {
            writeln!(s, "  v{} -> v{};", v, c).unwrap();
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_marks_roots() {
        let f = MultitypeForest::from_parents(2, vec![0, 1, 1], &[None, Some(0), None]).unwrap();
        let out = dot(&f, "f");
        assert_eq!(out.matches("doublecircle").count(), 2);
        assert!(out.contains("v0 -> v"));
        assert!(out.contains(PALETTE[1]));
    }
}
