use isotrivial_web::{classify_surface, plane_example, ramify_action};

fn parse(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn plane_example_classifies() {
    let data = plane_example(5, 1, "0,1,2,3,4");
    let out = parse(&classify_surface(&data));
    assert_eq!(out["report"]["deg_omega_X"], 10);
    assert!(out["table"].as_str().unwrap().starts_with("kappa"));
}

#[test]
fn translation_at_infinity() {
    let out = parse(&ramify_action(r#"{"p":5,"order":5,"stab":5,"mobius":[[1,0],[1,1]]}"#));
    assert_eq!(out["artin_a"], 8);
}

#[test]
fn errors_are_json() {
    assert!(parse(&classify_surface("{")).get("error").is_some());
    assert!(parse(&ramify_action("[]")).get("error").is_some());
    assert!(parse(&plane_example(5, 1, "0,9")).get("error").is_some());
    assert!(parse(&plane_example(4, 1, "0,1")).get("error").is_some());
}
