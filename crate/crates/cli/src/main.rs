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

//! `csq`: command-line front end for the contextual-subspace pipeline.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use csq::circuits::{trotter_circuit, Circuit};
use csq::contextual::{
    project_reference, relaxation_order, step_for_qubits, ContextualProblem, ExactEvaluator, RelaxationStep,
};
use csq::dense::MATRIX_QUBIT_CAP;
use csq::io::{read_hamiltonian, read_json, read_state, write_json, OperatorFile, StateFile};
use csq::noncontextual::{decompose_sum, optimize, split_hamiltonian, Strategy};
use csq::pauli::{Pauli, RotationSequence};
use csq::simulator::{format_bitstring, ground_energy, log_log_slope, parse_bitstring, rmse_experiment, StateVector};
use csq::tapering::{taper_hamiltonian, Reference};
use csq::vqe::{adapt_vqe, AdaptConfig, OperatorPool};
use csq::PauliSum;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "csq", version, about = "Contextual-subspace VQE toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Remove qubits stabilized by Z2 symmetries of the Hamiltonian.
    Taper {
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Reference bitstring selecting the symmetry sector.
        #[arg(long = "ref", conflicts_with = "ref_state", required_unless_present = "ref_state")]
        reference: Option<String>,
        /// Reference state file instead of a bitstring.
        #[arg(long)]
        ref_state: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Generators, rotations and sector; defaults next to `--out`.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Single-qubit Pauli the symmetries are mapped onto.
        #[arg(long, default_value = "z")]
        pauli: TargetPauli,
    },
    /// Solve the noncontextual part of the Hamiltonian classically.
    Noncon {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long, default_value = "diag-greedy")]
        strategy: Strategy,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the contextual subspace Hamiltonian on a given qubit budget.
    Csvqe {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long = "ref")]
        reference: String,
        /// Simulated qubit budget.
        #[arg(long)]
        qubits: usize,
        /// Stabilizers relaxed per greedy step.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value = "diag-greedy")]
        strategy: Strategy,
        #[arg(long, default_value = "z")]
        pauli: TargetPauli,
        #[arg(long)]
        out: PathBuf,
        /// Reduced Hamiltonian alone, ready for `adapt`.
        #[arg(long)]
        reduced: Option<PathBuf>,
        /// Per-size error table; defaults next to `--out`.
        #[arg(long)]
        errors: Option<PathBuf>,
    },
    /// Emit the Trotterized circuit of an ansatz operator.
    Circuit {
        /// Ordered terms; each coefficient is the rotation angle.
        #[arg(long)]
        op: PathBuf,
        #[arg(long, default_value_t = 1)]
        trotter: usize,
        #[arg(long, default_value = "openqasm2")]
        format: CircuitFormat,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shot-noise RMSE of sampled energies over powers of two.
    Sample {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Largest shot count per group, `2^k` or an integer.
        #[arg(long)]
        shots: String,
        #[arg(long, default_value_t = 20)]
        realizations: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// qubit-ADAPT-VQE on a (reduced) Hamiltonian.
    Adapt {
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Operator file whose strings form the pool; coefficients ignored.
        #[arg(long)]
        pool: PathBuf,
        #[arg(long = "ref")]
        reference: String,
        #[arg(long, allow_hyphen_values = true)]
        target_energy: Option<f64>,
        #[arg(long, default_value_t = 30)]
        max_cycles: usize,
        #[arg(long, default_value_t = 1)]
        trotter: usize,
        #[arg(long, default_value_t = 1e-3)]
        gradient_threshold: f64,
        #[arg(long)]
        out: PathBuf,
        /// Final ansatz as ordered terms, usable with `circuit --op`.
        #[arg(long)]
        ansatz_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetPauli {
    X,
    Y,
    Z,
}

impl From<TargetPauli> for Pauli {
    fn from(p: TargetPauli) -> Self {
        match p {
            TargetPauli::X => Pauli::X,
            TargetPauli::Y => Pauli::Y,
            TargetPauli::Z => Pauli::Z,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitFormat {
    Openqasm2,
    Json,
}

#[derive(Serialize)]
struct RotationRecord {
    generator: String,
    angle: f64,
}

fn rotation_records(seq: &RotationSequence) -> Vec<RotationRecord> {
    seq.iter()
        .map(|r| RotationRecord {
            generator: r.generator().to_string(),
            angle: r.angle(),
        })
        .collect()
}

#[derive(Serialize)]
struct CoeffRecord {
    pauli: String,
    coeff: f64,
}

fn coeff_records(terms: &[(csq::PauliTerm, f64)]) -> Vec<CoeffRecord> {
    terms
        .iter()
        .map(|(t, c)| CoeffRecord {
            pauli: t.to_string(),
            coeff: *c,
        })
        .collect()
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or_else(|| "out".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}{suffix}"))
}

fn load_hamiltonian(path: &Path) -> Result<PauliSum> {
    read_hamiltonian(path).with_context(|| format!("reading Hamiltonian {}", path.display()))
}

fn bits_reference(s: &str, n_qubits: usize) -> Result<Reference> {
    let bits = parse_bitstring(s)?;
    if bits.len() != n_qubits {
        bail!(
            "reference {s:?} has {} bits, Hamiltonian has {n_qubits} qubits",
            bits.len()
        );
    }
    Ok(Reference::Bits(bits))
}

/// `2^k` or a plain integer.
fn parse_shots(s: &str) -> Result<usize> {
    let s = s.trim();
    if let Some(k) = s.strip_prefix("2^") {
        let k: u32 = k.parse().with_context(|| format!("invalid exponent in {s:?}"))?;
        if k > 40 {
            bail!("shot exponent {k} is too large");
        }
        return Ok(1usize << k);
    }
    let n: usize = s.parse().with_context(|| format!("invalid shot count {s:?}"))?;
    if n == 0 {
        bail!("shot count must be positive");
    }
    Ok(n)
}

fn exact_if_feasible(h: &PauliSum) -> Result<Option<f64>> {
    if h.n_qubits() > MATRIX_QUBIT_CAP {
        return Ok(None);
    }
    Ok(Some(ground_energy(h)?))
}

#[derive(Serialize)]
struct TaperSidecar {
    n_qubits: usize,
    reduced_qubits: usize,
    target_pauli: Pauli,
    generators: Vec<String>,
    target_qubits: Vec<usize>,
    rotations: Vec<RotationRecord>,
    sector: Vec<i8>,
    reference: StateFile,
}

fn taper(
    hamiltonian: &Path,
    reference: Option<&str>,
    ref_state: Option<&Path>,
    out: &Path,
    sidecar: Option<PathBuf>,
    pauli: Pauli,
) -> Result<()> {
    let h = load_hamiltonian(hamiltonian)?;
    let reference = match (reference, ref_state) {
        (Some(bits), _) => bits_reference(bits, h.n_qubits())?,
        (None, Some(path)) => read_state(path)?,
        (None, None) => bail!("a reference is required"),
    };
    let t = taper_hamiltonian(&h, &reference, pauli)?;
    csq::io::write_operator(out, &t.reduced)?;
    let car = TaperSidecar {
        n_qubits: h.n_qubits(),
        reduced_qubits: t.reduced.n_qubits(),
        target_pauli: pauli,
        generators: t
            .map
            .iter()
            .flat_map(|m| m.generators())
            .map(|g| g.to_string())
            .collect(),
        target_qubits: t.map.as_ref().map_or_else(Vec::new, |m| m.target_qubits().to_vec()),
        rotations: t
            .map
            .as_ref()
            .map_or_else(Vec::new, |m| rotation_records(m.rotations())),
        sector: t.sector.nu.clone(),
        reference: StateFile::from_reference(&reference),
    };
    let sidecar = sidecar.unwrap_or_else(|| sibling(out, ".taper.json"));
    write_json(&sidecar, &car)?;
    eprintln!(
        "tapered {} -> {} qubits, sector {:?}",
        h.n_qubits(),
        t.reduced.n_qubits(),
        t.sector.nu
    );
    Ok(())
}

#[derive(Serialize)]
struct NoncontextualReport {
    n_qubits: usize,
    strategy: String,
    n_terms: usize,
    n_noncontextual_terms: usize,
    symmetry_terms: Vec<CoeffRecord>,
    classes: Vec<Vec<CoeffRecord>>,
    class_reps: Vec<String>,
    generators: Vec<String>,
    nu: Vec<i8>,
    r: Vec<f64>,
    energy: f64,
    exact_ground_energy: Option<f64>,
}

fn noncon(hamiltonian: &Path, strategy: Strategy, out: &Path) -> Result<()> {
    let h = load_hamiltonian(hamiltonian)?;
    let (nc, _) = split_hamiltonian(&h, strategy)?;
    let model = decompose_sum(&nc)?;
    let (state, energy) = optimize(&model);
    let report = NoncontextualReport {
        n_qubits: h.n_qubits(),
        strategy: strategy.to_string(),
        n_terms: h.len(),
        n_noncontextual_terms: model.n_terms(),
        symmetry_terms: coeff_records(model.symmetry_terms()),
        classes: model.classes().iter().map(|c| coeff_records(c)).collect(),
        class_reps: model.class_reps().iter().map(|c| c.to_string()).collect(),
        generators: model.generators().iter().map(|g| g.to_string()).collect(),
        nu: state.nu,
        r: state.r,
        energy,
        exact_ground_energy: exact_if_feasible(&h)?,
    };
    write_json(out, &report)?;
    eprintln!("noncontextual energy {energy:.10}");
    Ok(())
}

#[derive(Serialize)]
struct CsvqeReport {
    n_qubits: usize,
    strategy: String,
    depth: usize,
    requested_qubits: usize,
    target_pauli: Pauli,
    generators: Vec<String>,
    cr_index: Option<usize>,
    noncontextual_energy: f64,
    subset: Vec<usize>,
    fixed_qubits: Vec<usize>,
    sim_qubits: Vec<usize>,
    nu: Vec<i8>,
    rotations: Vec<RotationRecord>,
    /// Identity coefficient of the projected noncontextual part.
    subspace_noncontextual_energy: f64,
    energy: f64,
    exact_ground_energy: Option<f64>,
    delta_c: Option<f64>,
    /// Projected reference on the simulated qubits, when nonzero.
    reference: Option<StateFile>,
    hamiltonian: OperatorFile,
    chain: Vec<RelaxationStep>,
}

#[derive(Serialize)]
struct ErrorRow {
    n_sim: usize,
    n_fixed: usize,
    subset: String,
    energy: f64,
    delta_c: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn csvqe(
    hamiltonian: &Path,
    reference: &str,
    qubits: usize,
    depth: usize,
    strategy: Strategy,
    pauli: Pauli,
    out: &Path,
    reduced: Option<&Path>,
    errors: Option<PathBuf>,
) -> Result<()> {
    let h = load_hamiltonian(hamiltonian)?;
    let reference = bits_reference(reference, h.n_qubits())?;
    let problem = ContextualProblem::new(&h, strategy)?.with_target_pauli(pauli);
    let chain = relaxation_order(&problem, depth, &ExactEvaluator)?;
    let exact = exact_if_feasible(&h)?;
    let step = step_for_qubits(&chain, qubits).context("empty relaxation chain")?;
    if step.n_sim > qubits {
        eprintln!("no subspace fits {qubits} qubits; using {} qubits", step.n_sim);
    }
    let sub = problem.subspace(&step.subset)?;
    let projected = project_reference(&reference, &sub).ok().map(|p| match p.bits {
        Some(b) => StateFile::Bits {
            bits: format_bitstring(&b),
        },
        None => StateFile::from_state(&p.state),
    });
    if projected.is_none() {
        eprintln!("warning: the reference has no weight in the chosen subspace sector");
    }
    let report = CsvqeReport {
        n_qubits: h.n_qubits(),
        strategy: strategy.to_string(),
        depth,
        requested_qubits: qubits,
        target_pauli: pauli,
        generators: problem.model().generators().iter().map(|g| g.to_string()).collect(),
        cr_index: problem.cr_index(),
        noncontextual_energy: problem.nc_energy(),
        subset: step.subset.clone(),
        fixed_qubits: sub.fixed_qubits().to_vec(),
        sim_qubits: sub.sim_qubits().to_vec(),
        nu: sub.nu().to_vec(),
        rotations: rotation_records(sub.rotations()),
        subspace_noncontextual_energy: sub.nc_energy(),
        energy: step.energy,
        exact_ground_energy: exact,
        delta_c: exact.map(|e| step.energy - e),
        reference: projected,
        hamiltonian: OperatorFile::from_sum(sub.hamiltonian()),
        chain: chain.clone(),
    };
    write_json(out, &report)?;
    if let Some(path) = reduced {
        csq::io::write_operator(path, sub.hamiltonian())?;
    }
    let errors = errors.unwrap_or_else(|| sibling(out, ".errors.csv"));
    let mut w = csv::Writer::from_path(&errors).with_context(|| format!("writing {}", errors.display()))?;
    for s in &chain {
        w.serialize(ErrorRow {
            n_sim: s.n_sim,
            n_fixed: s.subset.len(),
            subset: s.subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
            energy: s.energy,
            delta_c: exact.map(|e| s.energy - e),
        })?;
    }
    w.flush()?;
    eprintln!(
        "contextual subspace on {} of {} qubits, energy {:.10}",
        sub.n_sim(),
        h.n_qubits(),
        step.energy
    );
    Ok(())
}

fn circuit(op: &Path, trotter: usize, format: CircuitFormat, out: Option<&Path>) -> Result<()> {
    let file: OperatorFile = read_json(op).with_context(|| format!("reading operator {}", op.display()))?;
    let terms = file.to_ordered_terms()?;
    let c = if terms.is_empty() {
        Circuit::new(file.n_qubits)
    } else {
        trotter_circuit(&terms, trotter)?
    };
    let text = match format {
        CircuitFormat::Openqasm2 => c.to_openqasm(),
        CircuitFormat::Json => serde_json::to_string_pretty(&c)? + "\n",
    };
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn sample(hamiltonian: &Path, state: &Path, shots: &str, realizations: usize, seed: u64, out: &Path) -> Result<()> {
    let h = load_hamiltonian(hamiltonian)?;
    let state = match read_state(state)? {
        Reference::Bits(b) => StateVector::basis(&b)?,
        Reference::State(s) => s,
    };
    if state.n_qubits() != h.n_qubits() {
        bail!(
            "state has {} qubits, Hamiltonian has {}",
            state.n_qubits(),
            h.n_qubits()
        );
    }
    if realizations == 0 {
        bail!("at least one realization is required");
    }
    let max = parse_shots(shots)?;
    let sweep: Vec<usize> = (0..usize::BITS)
        .map(|k| 1usize << k)
        .take_while(|&s| s <= max)
        .collect();
    let rows = rmse_experiment(&h, &state, &sweep, realizations, seed)?;
    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    match log_log_slope(&rows) {
        Some(m) => eprintln!("log-log slope {m:.4}"),
        None => eprintln!("log-log slope undefined"),
    }
    Ok(())
}

#[derive(Serialize)]
struct TraceRow {
    cycle: usize,
    nfev: usize,
    energy: f64,
    abs_error: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    hamiltonian: &Path,
    pool: &Path,
    reference: &str,
    target_energy: Option<f64>,
    max_cycles: usize,
    trotter: usize,
    gradient_threshold: f64,
    out: &Path,
    ansatz_out: Option<&Path>,
) -> Result<()> {
    let h = load_hamiltonian(hamiltonian)?;
    let pool_file: OperatorFile = read_json(pool).with_context(|| format!("reading pool {}", pool.display()))?;
    let pool = OperatorPool::new(pool_file.to_ordered_terms()?.into_iter().map(|(t, _)| t))?;
    let Reference::Bits(bits) = bits_reference(reference, h.n_qubits())? else {
        unreachable!("bit references only");
    };
    let config = AdaptConfig {
        gradient_threshold,
        target_energy,
        max_cycles,
        trotter_number: trotter,
        ..AdaptConfig::default()
    };
    let res = adapt_vqe(&h, &pool, &StateVector::basis(&bits)?, &config)?;
    for w in &res.warnings {
        eprintln!("warning: {w}");
    }
    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    for c in &res.cycles {
        w.serialize(TraceRow {
            cycle: c.cycle,
            nfev: c.nfev,
            energy: c.energy,
            abs_error: c.abs_error,
        })?;
    }
    w.flush()?;
    if let Some(path) = ansatz_out {
        let terms: Vec<_> = res
            .ansatz
            .terms
            .iter()
            .cloned()
            .zip(res.ansatz.thetas.iter().copied())
            .collect();
        write_json(path, &OperatorFile::from_ordered_terms(h.n_qubits(), &terms))?;
    }
    eprintln!(
        "{:?} after {} cycles, energy {:.10}",
        res.termination,
        res.cycles.len() - 1,
        res.energy
    );
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Taper {
            hamiltonian,
            reference,
            ref_state,
            out,
            sidecar,
            pauli,
        } => taper(
            &hamiltonian,
            reference.as_deref(),
            ref_state.as_deref(),
            &out,
            sidecar,
            pauli.into(),
        ),
        Command::Noncon {
            hamiltonian,
            strategy,
            out,
        } => noncon(&hamiltonian, strategy, &out),
        Command::Csvqe {
            hamiltonian,
            reference,
            qubits,
            depth,
            strategy,
            pauli,
            out,
            reduced,
            errors,
        } => csvqe(
            &hamiltonian,
            &reference,
            qubits,
            depth,
            strategy,
            pauli.into(),
            &out,
            reduced.as_deref(),
            errors,
        ),
        Command::Circuit {
            op,
            trotter,
            format,
            out,
        } => circuit(&op, trotter, format, out.as_deref()),
        Command::Sample {
            hamiltonian,
            state,
            shots,
            realizations,
            seed,
            out,
        } => sample(&hamiltonian, &state, &shots, realizations, seed, &out),
        Command::Adapt {
            hamiltonian,
            pool,
            reference,
            target_energy,
            max_cycles,
            trotter,
            gradient_threshold,
            out,
            ansatz_out,
        } => adapt(
            &hamiltonian,
            &pool,
            &reference,
            target_energy,
            max_cycles,
            trotter,
            gradient_threshold,
            &out,
            ansatz_out.as_deref(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shots_accept_power_and_integer_forms() {
        assert_eq!(parse_shots("2^10").unwrap(), 1024);
        assert_eq!(parse_shots("300").unwrap(), 300);
        assert!(parse_shots("0").is_err());
        assert!(parse_shots("2^x").is_err());
    }

    #[test]
    fn sibling_replaces_extension() {
        assert_eq!(
            sibling(Path::new("/a/b/out.json"), ".errors.csv"),
            Path::new("/a/b/out.errors.csv")
        );
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
