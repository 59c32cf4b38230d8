use std::process::Command;

fn quatram(args: &[&str]) -> (i32, String, String) {
    quatram_env(args, None)
}

fn quatram_env(args: &[&str], config: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quatram"));
    cmd.args(args).env_remove("QUATRAM_CONFIG");
    if let Some(c) = config {
        cmd.env("QUATRAM_CONFIG", c);
    }
    let out = cmd.output().expect("run quatram");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn catalog_matches_goldens_byte_for_byte() {
    let cases = [
        (&["catalog", "--tag", "2", "--e", "2"][..], include_str!("golden/catalog_tag2_e2.jsonl")),
        (&["catalog", "--tag", "1*", "--e", "2"][..], include_str!("golden/catalog_tag1s_e2.jsonl")),
        (&["catalog", "--tag", "2", "--e", "2", "--format", "csv"][..], include_str!("golden/catalog_tag2_e2.csv")),
        (&["catalog", "--tag", "1*", "--e", "2", "--format", "csv"][..], include_str!("golden/catalog_tag1s_e2.csv")),
    ];
    for (args, want) in cases {
        let (code, out, _) = quatram(args);
        assert_eq!(code, 0);
        assert_eq!(out, want, "{args:?}");
    }
}

#[test]
fn catalog_tag1_e1_is_single_stable_triple() {
    let (code, out, _) = quatram(&["catalog", "--tag", "1", "--e", "1"]);
    assert_eq!(code, 0);
    let rows: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0]["s1"].as_i64(), rows[0]["s2"].as_i64(), rows[0]["s3"].as_i64()), (Some(1), Some(2), Some(5)));
    assert_eq!(rows[0]["schema"], 1);
}

#[test]
fn only_hasse_arf_filters() {
    let (_, out, _) = quatram(&["catalog", "--tag", "1*", "--e", "2", "--only-hasse-arf"]);
    let s3: Vec<i64> = out
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["s3"].as_i64().unwrap())
        .collect();
    assert_eq!(s3, vec![3, 9]);
    let (_, out, _) = quatram(&["catalog", "--tag", "2", "--e", "3", "--only-hasse-arf"]);
    assert!(out.is_empty());
}

#[test]
fn verify_is_deterministic_under_seed() {
    let args = ["verify", "--field", "q2i", "--samples", "20", "--seed", "42"];
    let (c1, a, _) = quatram(&args);
    let (c2, b, _) = quatram(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (_, c, _) = quatram(&["verify", "--field", "q2i", "--samples", "20", "--seed", "43"]);
    assert_ne!(a, c);
    let last: serde_json::Value = serde_json::from_str(a.lines().last().unwrap()).unwrap();
    assert_eq!(last["kind"], "summary");
    assert_eq!(last["violations"], 0);
    for l in a.lines().take(20) {
        let r: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(r["u"].as_str().unwrap().chars().all(|c| c == '0' || c == '1'));
        assert_eq!(r["u"].as_str().unwrap().len(), 4);
    }
}

#[test]
fn verify_csv_has_header_and_rows() {
    let (code, out, err) = quatram(&["verify", "--field", "q2sqrt2", "--samples", "5", "--seed", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
    assert!(out.starts_with("schema,kind,field,index,u,v,k,tag,s1,s2,s3"));
    assert!(err.contains("\"kind\":\"summary\""));
}

#[test]
fn witness_exit_code_tracks_mismatches() {
    let (code, out, _) = quatram(&["witness", "--field", "t4i", "--tag", "1*"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.contains("\"matched\":true")));
    // unrealizable over a residue field F₂
    let (code, out, _) = quatram(&["witness", "--field", "q2i", "--tag", "2", "--triple", "1,5,13"]);
    assert_eq!(code, 1);
    assert!(out.contains("unreachable"));
    let (code, out, _) = quatram(&["witness", "--field", "q2i", "--tag", "2", "--triple", "1,7,15"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"matched\":true"));
    let (code, out, _) = quatram(&["witness", "--field", "q2i", "--tag", "2", "--triple", "1,7,14"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"status\":\"triple not in catalog\""));
}

#[test]
fn witness_needs_i() {
    let (code, out, _) = quatram(&["witness", "--field", "q2sqrt2", "--tag", "2"]);
    assert_eq!(code, 1);
    assert!(out.lines().all(|l| l.contains("requires sqrt(-1)")));
}

#[test]
fn inline_and_config_fields() {
    let (code, a, _) = quatram(&["verify", "--field", "1,2,2;2,40", "--samples", "5", "--seed", "3"]);
    assert_eq!(code, 0);
    let dir = std::env::temp_dir().join(format!("quatram-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fields.toml");
    std::fs::write(&path, "[fields.gauss]\nf = 1\neis = [[2], [2]]\nbits = 40\n").unwrap();
    let (code, b, _) = quatram_env(
        &["verify", "--field", "gauss", "--samples", "5", "--seed", "3"],
        Some(path.to_str().unwrap()),
    );
    assert_eq!(code, 0);
    let strip = |s: &str| -> Vec<String> {
        s.lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("field");
                v.to_string()
            })
            .collect()
    };
    assert_eq!(strip(&a), strip(&b));
    let (code, _, err) = quatram(&["verify", "--field", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown field preset"));
}

#[test]
fn selftest_passes() {
    let (code, out, _) = quatram(&["selftest"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.contains("\"pass\":true")));
}
