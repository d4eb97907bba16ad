//! Static stage listings for `catbell describe`.

use crate::config::Protocol;

pub struct Description {
    pub protocol: Protocol,
    pub summary: &'static str,
    pub stages: &'static [&'static str],
    pub modules: &'static [&'static str],
    pub csv_columns: &'static [&'static str],
}

pub fn describe(protocol: Protocol) -> Description {
    match protocol {
        Protocol::Prepare => Description {
            protocol,
            summary: "entangle two coherent modes with a cross-Kerr phase of π and compare with the analytic state",
            stages: &["coherent |α⟩|β⟩", "cross-Kerr(π)", "fidelity against both analytic factorizations"],
            modules: &["bosonic", "encoding"],
            csv_columns: &["x", "y", "re", "im", "weight"],
        },
        Protocol::Rotate => Description {
            protocol,
            summary: "logical x-rotations realized by small displacements D(iε) with ε = θ/(2α)",
            stages: &["logical basis", "D(iε) per angle", "branch fidelities against exp(−ε²)"],
            modules: &["bosonic", "encoding"],
            csv_columns: &["theta", "epsilon", "branch0", "branch1", "analytic", "max_error"],
        },
        Protocol::SwapReport => Description {
            protocol,
            summary: "truth tables of the mode-ion gates and the three-gate swap",
            stages: &["u_ve (ideal and literal)", "u_ev (displacement and surrogate)", "u_swap = u_ve·u_ev·u_ve"],
            modules: &["gates", "encoding"],
            csv_columns: &["gate", "input", "target", "fidelity", "overlap_re", "overlap_im"],
        },
        Protocol::HeatSweep => Description {
            protocol,
            summary: "motional heating of an even cat and a coherent state",
            stages: &[
                "master equation γ(D[a] + D[a†]) integrated with RK4",
                "optional quantum-jump ensemble at the final time",
            ],
            modules: &["noise (master equation, trajectories)"],
            csv_columns: &["time", "mean_n", "mean_n_analytic", "parity", "coherent_a_re", "coherent_a_im", "trace"],
        },
        Protocol::BellScan => Description {
            protocol,
            summary: "CHSH value of the heated Bell mixture over a grid of δ",
            stages: &["mixed Bell state ρ(δ)", "four correlations at the configured angles", "B and the violation crossing"],
            modules: &["noise", "bell"],
            csv_columns: &["delta", "B"],
        },
        Protocol::FullPipeline => Description {
            protocol,
            summary: "end-to-end transfer of mode entanglement to two ions and a CHSH test",
            stages: &[
                "cross-Kerr prep",
                "Hadamard",
                "heating",
                "swap ×2",
                "CHSH",
            ],
            modules: &["encoding", "noise", "gates", "bell", "pipeline"],
            csv_columns: &["pair", "theta1", "theta2", "E", "SE"],
        },
    }
}

impl Description {
    pub fn render(&self) -> String {
        let mut out = format!("{}: {}\n", self.protocol.name(), self.summary);
        out.push_str(&format!("stages: {}\n", self.stages.join(" → ")));
        out.push_str(&format!("modules: {}\n", self.modules.join(", ")));
        out.push_str(&format!("csv columns: {}\n", self.csv_columns.join(",")));
        out
    }
}
