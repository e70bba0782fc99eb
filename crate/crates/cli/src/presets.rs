//! Named figure presets. All use `m = κ = γ = 1`, the default sample count
//! and the default window; the localized-particle figures use `N = 11`.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    Chain { n_sites: usize, state: &'static str },
    Oscillator2d { nu1: u32, nu2: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: PresetKind,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1",
        description: "2D oscillator eigenstate (2,1), scatter plot",
        kind: PresetKind::Oscillator2d { nu1: 2, nu2: 1 },
    },
    Preset {
        name: "fig2",
        description: "ground state, N=15",
        kind: PresetKind::Chain {
            n_sites: 15,
            state: "vac",
        },
    },
    Preset {
        name: "fig3",
        description: "one particle at rest, N=15",
        kind: PresetKind::Chain {
            n_sites: 15,
            state: "a[0] vac",
        },
    },
    Preset {
        name: "fig4",
        description: "two particles at rest, N=15",
        kind: PresetKind::Chain {
            n_sites: 15,
            state: "a[0] a[0] vac",
        },
    },
    Preset {
        name: "fig5",
        description: "one particle with k=1 (standing wave), N=15",
        kind: PresetKind::Chain {
            n_sites: 15,
            state: "a[1] vac",
        },
    },
    Preset {
        name: "fig6",
        description: "one particle localized at n=5, N=11",
        kind: PresetKind::Chain {
            n_sites: 11,
            state: "b[5] vac",
        },
    },
    Preset {
        name: "fig7",
        description: "two particles localized at n=3 and n=8, N=11",
        kind: PresetKind::Chain {
            n_sites: 11,
            state: "b[3] b[8] vac",
        },
    },
    Preset {
        name: "fig8a",
        description: "two particles localized at n=5 and n=6, N=11",
        kind: PresetKind::Chain {
            n_sites: 11,
            state: "b[5] b[6] vac",
        },
    },
    Preset {
        name: "fig8b",
        description: "two particles both localized at n=5, N=11",
        kind: PresetKind::Chain {
            n_sites: 11,
            state: "b[5] b[5] vac",
        },
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    /// The equivalent explicit command line.
    pub fn command_line(&self) -> String {
        match self.kind {
            PresetKind::Chain { n_sites, state } => {
                format!(
                    "chainviz --n {n_sites} --state '{state}' --out {}.svg",
                    self.name
                )
            }
            PresetKind::Oscillator2d { nu1, nu2 } => {
                format!(
                    "chainviz --mode2d --nu1 {nu1} --nu2 {nu2} --out {}.svg",
                    self.name
                )
            }
        }
    }
}
