// Copyright 2026 The csq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! End-to-end runs of the `csq` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/synthetic_six_qubit.json")
}

fn csq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = csq(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn taper_writes_reduced_hamiltonian_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    ok(&[
        "taper",
        "--hamiltonian",
        f.to_str().unwrap(),
        "--ref",
        "111000",
        "--out",
        &p(dir.path(), "reduced.json"),
    ]);
    let reduced = json(&dir.path().join("reduced.json"));
    let car = json(&dir.path().join("reduced.taper.json"));
    let removed = car["sector"].as_array().unwrap().len();
    assert!(removed >= 1);
    assert_eq!(reduced["n_qubits"].as_u64().unwrap() as usize, 6 - removed);
    assert_eq!(car["generators"].as_array().unwrap().len(), removed);
    assert_eq!(car["target_pauli"], "Z");
    assert!(!car["rotations"].as_array().unwrap().is_empty());
}

#[test]
fn taper_pauli_override_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    let car = p(dir.path(), "side.json");
    ok(&[
        "taper",
        "--hamiltonian",
        f.to_str().unwrap(),
        "--ref",
        "111000",
        "--out",
        &p(dir.path(), "r.json"),
        "--sidecar",
        &car,
        "--pauli",
        "x",
    ]);
    assert_eq!(json(Path::new(&car))["target_pauli"], "X");
}

#[test]
fn noncon_energy_bounds_ground_energy() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    let out = p(dir.path(), "model.json");
    ok(&[
        "noncon",
        "--hamiltonian",
        f.to_str().unwrap(),
        "--strategy",
        "diag-greedy",
        "--out",
        &out,
    ]);
    let m = json(Path::new(&out));
    let e = m["energy"].as_f64().unwrap();
    let exact = m["exact_ground_energy"].as_f64().unwrap();
    assert!(e >= exact - 1e-9);
    let r: f64 = m["r"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap().powi(2))
        .sum();
    assert!(m["r"].as_array().unwrap().is_empty() || (r - 1.0).abs() < 1e-9);
}

#[test]
fn csvqe_respects_budget_and_writes_error_table() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    let out = p(dir.path(), "cs.json");
    ok(&[
        "csvqe",
        "--hamiltonian",
        f.to_str().unwrap(),
        "--ref",
        "111000",
        "--qubits",
        "3",
        "--out",
        &out,
    ]);
    let report = json(Path::new(&out));
    assert!(report["sim_qubits"].as_array().unwrap().len() <= 3);
    assert_eq!(
        report["hamiltonian"]["n_qubits"],
        report["sim_qubits"].as_array().unwrap().len()
    );
    assert!(report["delta_c"].as_f64().unwrap() >= -1e-9);
    let (header, rows) = csv_rows(&dir.path().join("cs.errors.csv"));
    assert_eq!(header, ["n_sim", "n_fixed", "subset", "energy", "delta_c"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "6");
    assert!(last[4].parse::<f64>().unwrap().abs() < 1e-9);
    let deltas: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(deltas.windows(2).all(|w| w[1] <= w[0] + 1e-9));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn circuit_emits_openqasm_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let op = write(
        dir.path(),
        "ansatz.json",
        r#"{"n_qubits": 3, "terms": [{"pauli": "XYZ", "re": 0.3}, {"pauli": "IZZ", "re": -0.1}]}"#,
    );
    let qasm =
        String::from_utf8(ok(&["circuit", "--op", &op, "--trotter", "2", "--format", "openqasm2"]).stdout).unwrap();
    assert!(qasm.starts_with("OPENQASM 2.0;"));
    for line in qasm.lines().skip(3) {
        let gate = line.split([' ', '(']).next().unwrap();
        assert!(["h", "s", "sdg", "x", "cx", "rz"].contains(&gate), "{line}");
    }
    let out = p(dir.path(), "c.json");
    ok(&["circuit", "--op", &op, "--format", "json", "--out", &out]);
    let c = json(Path::new(&out));
    assert_eq!(c["n_qubits"], 3);
    assert!(!c["gates"].as_array().unwrap().is_empty());
}

#[test]
fn sample_writes_power_of_two_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(
        dir.path(),
        "h.json",
        r#"{"n_qubits": 2, "terms": [{"pauli": "XX", "re": 0.5}, {"pauli": "ZI", "re": -0.3}, {"pauli": "YZ", "re": 0.2}]}"#,
    );
    let state = write(
        dir.path(),
        "s.json",
        r#"{"n_qubits": 2, "amplitudes": [[0.5, 0], [0.5, 0], [0, 0.5], [0.5, 0]]}"#,
    );
    let out = p(dir.path(), "rmse.csv");
    ok(&[
        "sample",
        "--hamiltonian",
        &h,
        "--state",
        &state,
        "--shots",
        "2^8",
        "--realizations",
        "5",
        "--seed",
        "7",
        "--out",
        &out,
    ]);
    let (header, rows) = csv_rows(Path::new(&out));
    assert_eq!(header, ["shots", "rmse"]);
    let shots: Vec<usize> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(shots, (0..=8).map(|k| 1usize << k).collect::<Vec<_>>());
    let again = p(dir.path(), "rmse2.csv");
    ok(&[
        "sample",
        "--hamiltonian",
        &h,
        "--state",
        &state,
        "--shots",
        "256",
        "--realizations",
        "5",
        "--seed",
        "7",
        "--out",
        &again,
    ]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn adapt_trace_reaches_target() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"n_qubits": 2, "terms": [{"pauli": "ZI", "re": 0.6}, {"pauli": "IZ", "re": 0.4}, {"pauli": "XX", "re": 0.3}, {"pauli": "XI", "re": 0.2}]}"#;
    let h = write(dir.path(), "h.json", text);
    let target = csq::simulator::ground_energy(&csq::io::read_hamiltonian(Path::new(&h)).unwrap()).unwrap();
    let pool = write(
        dir.path(),
        "pool.json",
        r#"{"n_qubits": 2, "terms": [{"pauli": "XY", "re": 1}, {"pauli": "YX", "re": 1}, {"pauli": "YI", "re": 1}, {"pauli": "IY", "re": 1}]}"#,
    );
    let target = target.to_string();
    let out = p(dir.path(), "trace.csv");
    let ansatz = p(dir.path(), "ansatz.json");
    ok(&[
        "adapt",
        "--hamiltonian",
        &h,
        "--pool",
        &pool,
        "--ref",
        "00",
        "--target-energy",
        &target,
        "--out",
        &out,
        "--ansatz-out",
        &ansatz,
    ]);
    let (header, rows) = csv_rows(Path::new(&out));
    assert_eq!(header, ["cycle", "nfev", "energy", "abs_error"]);
    assert_eq!(rows[0][0], "0");
    let last_err: f64 = rows.last().unwrap()[3].parse().unwrap();
    assert!(last_err < 1.6e-3);
    assert!(json(Path::new(&ansatz))["terms"].as_array().unwrap().len() == rows.len() - 1);
    ok(&["circuit", "--op", &ansatz]);
}

#[test]
fn mismatched_reference_fails_cleanly() {
    let f = fixture();
    let dir = tempfile::tempdir().unwrap();
    let out = csq(&[
        "taper",
        "--hamiltonian",
        f.to_str().unwrap(),
        "--ref",
        "101",
        "--out",
        &p(dir.path(), "r.json"),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 bits"));
}
