//! Cover document format: canonicalization, round-trip stability, and
//! rejection of malformed inputs.

use nervecheck_cli::document::{
    digest, document_of, emit_cover, emit_document, parse_cover, record_count, ParseError,
};
use nervecheck_core::generators;

#[test]
fn e1_document_has_sixteen_records_and_two_elements() {
    let canonical = emit_cover(&generators::gen_e1(), None);
    let (cover, doc) = parse_cover(canonical.as_bytes()).unwrap();
    assert_eq!(cover.len(), 2);
    assert_eq!(record_count(&doc), 16);
    assert_eq!(doc.vertex_count, 4);
}

#[test]
fn empty_cover_is_rejected() {
    let raw = r#"{"formatVersion": 1, "vertexCount": 1, "cover": []}"#;
    let err = parse_cover(raw.as_bytes()).unwrap_err();
    assert!(matches!(err, ParseError::EmptyCover));
}

#[test]
fn emit_after_parse_is_canonicalization() {
    // unsorted vertices, missing faces, unsorted simplex list, numeric births
    let raw = r#"{
        "formatVersion": 1,
        "vertexCount": 3,
        "cover": [
            {"name": "A", "simplices": [
                {"verts": [2, 0, 1], "birth": 1.0},
                {"verts": [0], "birth": "0.5"}
            ]}
        ]
    }"#;
    let (_, doc) = parse_cover(raw.as_bytes()).unwrap();
    let canonical = emit_document(&doc);
    // the closure adds all faces of the triangle
    assert_eq!(record_count(&doc), 7);
    // a second pass is a fixpoint
    let (_, doc2) = parse_cover(canonical.as_bytes()).unwrap();
    assert_eq!(canonical, emit_document(&doc2));
    // decimals are trimmed
    assert!(canonical.contains("\"0.5\""));
    assert!(canonical.contains("\"1\""));
    assert!(!canonical.contains("1.0"));
}

#[test]
fn round_trip_is_stable_on_a_seeded_corpus() {
    for seed in 0..20u64 {
        let params = if seed % 2 == 0 {
            generators::RandomCoverParams::good()
        } else {
            generators::RandomCoverParams::perturbed()
        };
        let cover = generators::gen_random(seed, &params);
        let first = emit_cover(&cover, None);
        let (parsed, doc) = parse_cover(first.as_bytes()).unwrap();
        let second = emit_document(&doc);
        assert_eq!(
            first, second,
            "seed {}: canonical form must be a fixpoint",
            seed
        );
        assert_eq!(digest(&first), digest(&second));
        // and the parsed cover re-emits identically
        assert_eq!(emit_cover(&parsed, None), first);
    }
}

#[test]
fn vertex_bounds_and_duplicates_are_rejected() {
    let out_of_range = r#"{
        "formatVersion": 1, "vertexCount": 2,
        "cover": [{"name": "A", "simplices": [{"verts": [0, 5], "birth": "0"}]}]
    }"#;
    assert!(matches!(
        parse_cover(out_of_range.as_bytes()).unwrap_err(),
        ParseError::VertexOutOfRange { vertex: 5, .. }
    ));
    let repeated = r#"{
        "formatVersion": 1, "vertexCount": 3,
        "cover": [{"name": "A", "simplices": [{"verts": [1, 1], "birth": "0"}]}]
    }"#;
    assert!(matches!(
        parse_cover(repeated.as_bytes()).unwrap_err(),
        ParseError::RepeatedVertex { .. }
    ));
}

#[test]
fn inconsistent_births_pass_through() {
    let raw = r#"{
        "formatVersion": 1, "vertexCount": 2,
        "cover": [{"name": "A", "simplices": [
            {"verts": [0], "birth": "2"},
            {"verts": [0, 1], "birth": "1"}
        ]}]
    }"#;
    assert!(matches!(
        parse_cover(raw.as_bytes()).unwrap_err(),
        ParseError::Births { .. }
    ));
}

#[test]
fn negative_and_non_finite_births_are_rejected() {
    for bad in ["-1", "inf", "nan"] {
        let raw = format!(
            r#"{{"formatVersion": 1, "vertexCount": 1,
                "cover": [{{"name": "A", "simplices": [{{"verts": [0], "birth": "{}"}}]}}]}}"#,
            bad
        );
        assert!(
            parse_cover(raw.as_bytes()).is_err(),
            "birth '{}' must be rejected",
            bad
        );
    }
}

#[test]
fn family_metadata_survives_canonicalization() {
    let cover = generators::gen_tight(2);
    let family = nervecheck_cli::document::tight_family(2);
    let emitted = emit_document(&document_of(&cover, Some(family.clone())));
    let (_, doc) = parse_cover(emitted.as_bytes()).unwrap();
    assert_eq!(doc.family, Some(family));
}

#[test]
fn oversized_inputs_are_rejected_cleanly() {
    // one simplex with too many vertices
    let verts: Vec<u32> = (0..30).collect();
    let raw = format!(
        r#"{{"formatVersion": 1, "vertexCount": 64,
            "cover": [{{"name": "A", "simplices": [{{"verts": {:?}, "birth": "0"}}]}}]}}"#,
        verts
    );
    assert!(matches!(
        parse_cover(raw.as_bytes()).unwrap_err(),
        ParseError::SimplexTooLarge { verts: 30, .. }
    ));
    // too many cover elements
    let element = r#"{"name": "A", "simplices": [{"verts": [0], "birth": "0"}]}"#;
    let many = vec![element; 17].join(",");
    let raw = format!(
        r#"{{"formatVersion": 1, "vertexCount": 1, "cover": [{}]}}"#,
        many
    );
    assert!(matches!(
        parse_cover(raw.as_bytes()).unwrap_err(),
        ParseError::TooManyElements(17)
    ));
}

#[test]
fn empty_elements_parse_and_compute() {
    // an element with no simplices never contributes; everything still runs
    let raw = r#"{
        "formatVersion": 1, "vertexCount": 2,
        "cover": [
            {"name": "A", "simplices": [{"verts": [0, 1], "birth": "0"}]},
            {"name": "B", "simplices": []}
        ]
    }"#;
    let (cover, doc) = parse_cover(raw.as_bytes()).unwrap();
    assert_eq!(record_count(&doc), 3);
    let report = nervecheck_core::metrics::shifted_bound_check(&cover, 1).unwrap();
    assert!(report.verdict && report.shifted_verdict);
    // the nerve sees only the nonempty element
    assert_eq!(cover.nerve_filtration(2).len(), 1);
}

#[test]
fn unknown_format_version_is_rejected() {
    let raw = r#"{"formatVersion": 2, "vertexCount": 1,
        "cover": [{"name": "A", "simplices": [{"verts": [0], "birth": "0"}]}]}"#;
    assert!(matches!(
        parse_cover(raw.as_bytes()).unwrap_err(),
        ParseError::Version(2)
    ));
}
