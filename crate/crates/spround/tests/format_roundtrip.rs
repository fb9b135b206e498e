//! Property tests for the text and JSON formats.

use proptest::prelude::*;

use spround::io::{parse_graph, serialize_graph};
use spround::json::{ReportDoc, RoundingDoc};
use spround_core::graph::{Rounding, WeightedGraph};
use spround_core::rational::{parse_rational, ratio};

fn arbitrary_graph() -> impl Strategy<Value = WeightedGraph> {
    // up to 8 vertices; edge set chosen by mask over all pairs
    (2usize..=8, any::<u32>(), prop::collection::vec((0i64..=30, 1i64..=10), 28)).prop_map(
        |(n, mask, weights)| {
            let mut edges = Vec::new();
            let mut bit = 0;
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if mask >> (bit % 28) & 1 == 1 {
                        let (num, den) = weights[bit % weights.len()];
                        edges.push((u, v, ratio(num, den)));
                    }
                    bit += 1;
                }
            }
            WeightedGraph::from_edges(n, edges).unwrap()
        },
    )
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(graph in arbitrary_graph()) {
        let text = serialize_graph(&graph);
        let parsed = parse_graph(&text).unwrap();
        // vertex count may shrink when trailing vertices are isolated; the
        // edges themselves are bit-exact
        prop_assert_eq!(parsed.edges(), graph.edges());
        if graph
            .edges()
            .iter()
            .any(|e| e.v as usize == graph.vertex_count() - 1)
        {
            prop_assert_eq!(parsed.vertex_count(), graph.vertex_count());
        }
    }

    #[test]
    fn rounding_json_round_trips(values in prop::collection::vec((0u32..6, 6u32..12, 0u64..100), 0..12)) {
        let rounding = Rounding::from_pairs(
            values.into_iter().map(|(u, v, x)| ((u, v), x)),
        );
        let doc = RoundingDoc::from_rounding(&rounding);
        let text = serde_json::to_string(&doc).unwrap();
        let back: RoundingDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_rounding(), rounding);
    }

    #[test]
    fn rational_literals_round_trip(num in -1000i64..1000, den in 1i64..1000) {
        let r = ratio(num, den);
        let text = spround_core::rational::format_rational(&r);
        prop_assert_eq!(parse_rational(&text).unwrap(), r);
    }
}

#[test]
fn report_json_is_schema_stable() {
    let text = r#"{
        "level": "weak",
        "comparison": "closed",
        "epsilon": "7/8",
        "passed": false,
        "worst_error": "-9/10",
        "witness": {"u": 3, "v": 5, "description": "shortest-path weight changes by -9/10"}
    }"#;
    let doc: ReportDoc = serde_json::from_str(text).unwrap();
    assert_eq!(doc.epsilon, "7/8");
    assert!(!doc.passed);
    let round = serde_json::to_string(&doc).unwrap();
    let back: ReportDoc = serde_json::from_str(&round).unwrap();
    assert_eq!(back, doc);
}
