//! Output-contract checks: emitted JSON parses back, basis columns verify
//! numerically, exit codes follow the documented mapping, and stats reports
//! are seed-deterministic.

use std::time::Duration;

use exlat::oracle::{oracle_roots, verify_relation};
use exlat_cli::{cmd_basis, cmd_check_e, cmd_oracle, parse::parse_poly, PipelineOptions};

#[test]
fn basis_json_round_trips_and_verifies() {
    for input in ["-2,0,0,1", "x^2+1", "1,-3,1", "-1,-3,1"] {
        let (json, code) = cmd_basis(input, &PipelineOptions::default()).unwrap();
        assert_eq!(code, 0, "{} should be tractable", input);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["status"], "basis");
        let f = parse_poly(input).unwrap();
        let mut or = oracle_roots(&f).unwrap();
        let n_distinct = or.distinct.len();
        for col in v["basis"].as_array().unwrap() {
            let coords: Vec<i64> = col
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_i64().unwrap())
                .collect();
            assert_eq!(coords.len(), or.layout.len());
            let mut folded = vec![0i64; n_distinct];
            for (coord, &slot) in or.layout.iter().enumerate() {
                folded[slot] += coords[coord];
            }
            let verdict = verify_relation(&or.defining, &mut or.distinct, &folded, 100).unwrap();
            assert!(verdict.holds(), "column {:?} from {} fails verification", coords, input);
        }
        // Roots parse as decimals.
        for r in v["roots"].as_array().unwrap() {
            let _: f64 = r["re"].as_str().unwrap().parse().unwrap();
            let _: f64 = r["im"].as_str().unwrap().parse().unwrap();
            let rad: f64 = r["radius"].as_str().unwrap().parse().unwrap();
            assert!(rad >= 0.0);
        }
    }
}

#[test]
fn exit_code_contract() {
    // 0: basis.
    let (_, code) = cmd_basis("x^3-2", &PipelineOptions::default()).unwrap();
    assert_eq!(code, 0);
    // 3: definitive F.
    let (_, code) = cmd_basis("x^2-1", &PipelineOptions::default()).unwrap();
    assert_eq!(code, 3);
    let (_, code) = cmd_check_e("0,1,1", &PipelineOptions::default()).unwrap();
    assert_eq!(code, 3);
    // 1: input errors.
    assert_eq!(
        cmd_basis("not a polynomial", &PipelineOptions::default())
            .unwrap_err()
            .exit_code(),
        1
    );
    assert_eq!(cmd_oracle("xx", 2, 50, 1).unwrap_err().exit_code(), 1);
    let opts = PipelineOptions { max_degree: 3, ..Default::default() };
    assert_eq!(cmd_basis("x^5-2", &opts).unwrap_err().exit_code(), 1);
    // 4: timeout (deadline already expired before the first phase poll).
    let opts = PipelineOptions {
        timeout: Some(Duration::from_nanos(1)),
        ..Default::default()
    };
    let err = cmd_basis("x^9-2x^3+x^2+7", &opts).unwrap_err();
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn oracle_json_matches_library() {
    let (json, _) = cmd_oracle("-2,0,0,1", 4, 100, 1).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rank"], 2);
    let lib = exlat::oracle::brute_force_relations(&parse_poly("-2,0,0,1").unwrap(), 4, 100)
        .unwrap();
    let cols: Vec<Vec<i64>> = v["basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
        .collect();
    let parsed = exlat::LatticeBasis::from_i64_columns(3, &cols);
    assert_eq!(parsed, lib);
}
