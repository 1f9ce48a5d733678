//! Named parameter sets for the standard scenarios.

use std::f64::consts::PI;
use std::path::PathBuf;

use movwell_core::{FdOptions, SpectralOptions, WallMotion};

use crate::config::{Initial, InitialKind, Method, Observable, Resolutions, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: RunConfig,
    pub resolutions: Resolutions,
}

struct Spec {
    name: &'static str,
    description: &'static str,
    motion: WallMotion,
    initial: Initial,
    t_max: f64,
    dt: f64,
    n_samples: usize,
    outputs: Vec<Observable>,
    resolutions: Resolutions,
}

impl Spec {
    fn build(self) -> Preset {
        Preset {
            name: self.name,
            description: self.description,
            config: RunConfig {
                scenario: self.name.to_string(),
                motion: self.motion,
                method: Method::Spectral,
                resolution: self.resolutions.spectral,
                initial: self.initial,
                t_max: self.t_max,
                dt: self.dt,
                n_samples: self.n_samples,
                outputs: self.outputs,
                density_times: vec![self.t_max],
                density_points: 2001,
                output_path: PathBuf::from("out").join(self.name),
                spectral: SpectralOptions::default(),
                fd: FdOptions::default(),
            },
            resolutions: self.resolutions,
        }
    }
}

fn motion(m: movwell_core::Result<WallMotion>) -> WallMotion {
    m.expect("preset wall parameters are valid")
}

const FOJON_2: Initial = Initial {
    kind: InitialKind::Fojon,
    j: 2,
};

fn oscillating(name: &'static str, description: &'static str, omega: f64, dt: f64, k_max: usize) -> Spec {
    Spec {
        name,
        description,
        motion: motion(WallMotion::oscillatory(1.0, 0.3, omega)),
        initial: FOJON_2,
        t_max: 3.0,
        dt,
        n_samples: 1001,
        outputs: vec![
            Observable::Norm,
            Observable::EnergyNormalized,
            Observable::Position,
            Observable::Density,
        ],
        resolutions: Resolutions {
            spectral: k_max,
            fd: 30,
            exact: 1,
        },
    }
}

/// All presets, in display order.
pub fn all() -> Vec<Preset> {
    let compression = motion(WallMotion::uniform(1.0, -16.0));
    let end = 1.0 / 16.0 - 1.0 / 1000.0;
    vec![
        Spec {
            name: "uniform-a16",
            description: "wall compressing at a = -16 from L0 = 1, moving-wall state j = 2, until t = 1/16 - 1/1000",
            motion: compression,
            initial: FOJON_2,
            t_max: end,
            dt: 1e-5,
            n_samples: 101,
            outputs: vec![Observable::Norm, Observable::Energy, Observable::Density],
            resolutions: Resolutions {
                spectral: 60,
                fd: 100,
                exact: 1,
            },
        }
        .build(),
        Spec {
            name: "doescher-a16",
            description: "ground state of the fixed box released into the a = -16 compression",
            motion: compression,
            initial: Initial {
                kind: InitialKind::Doescher,
                j: 1,
            },
            t_max: end,
            dt: 1e-5,
            n_samples: 101,
            outputs: vec![Observable::Norm, Observable::Energy, Observable::Position],
            resolutions: Resolutions {
                spectral: 10,
                fd: 100,
                exact: 120,
            },
        }
        .build(),
        oscillating(
            "fojon-oscillating-w1",
            "wall oscillating with a = 0.3, omega = 1 (alpha = 3/40), moving-wall state j = 2, t in [0, 3]",
            1.0,
            1e-4,
            20,
        )
        .build(),
        oscillating(
            "fojon-oscillating-w10",
            "wall oscillating with a = 0.3, omega = 10 (alpha = 3/4), moving-wall state j = 2, t in [0, 3]",
            10.0,
            1e-4,
            40,
        )
        .build(),
        oscillating(
            "fojon-oscillating-w4pi2",
            "wall oscillating with a = 0.3, omega = 4 pi^2 (alpha = 3 pi^2/10), moving-wall state j = 2, t in [0, 3]",
            4.0 * PI * PI,
            1e-5,
            60,
        )
        .build(),
        Spec {
            name: "sudden-b10",
            description: "sudden expansion l(t) = 2 - 1/(1 + 100 t^2) from the first excited state, t in [0, 3]",
            motion: motion(WallMotion::sudden_expansion(2.0, 10.0)),
            initial: FOJON_2,
            t_max: 3.0,
            dt: 1e-5,
            n_samples: 1001,
            outputs: vec![Observable::Norm, Observable::Position],
            resolutions: Resolutions {
                spectral: 40,
                fd: 100,
                exact: 1,
            },
        }
        .build(),
    ]
}

pub fn find(name: &str) -> Result<Preset> {
    let presets = all();
    let names: Vec<&str> = presets.iter().map(|p| p.name).collect();
    let known = names.join(", ");
    presets
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CliError::usage("preset", format!("unknown preset '{name}' (known: {known})")))
}

/// Defaults for an explicitly given wall law.
pub fn custom(motion: WallMotion) -> (RunConfig, Resolutions) {
    let resolutions = Resolutions {
        spectral: 20,
        fd: 100,
        exact: 60,
    };
    let config = RunConfig {
        scenario: "custom".into(),
        motion,
        method: Method::Spectral,
        resolution: resolutions.spectral,
        initial: Initial {
            kind: InitialKind::Fojon,
            j: 1,
        },
        t_max: 1.0,
        dt: 1e-4,
        n_samples: 101,
        outputs: vec![Observable::Norm, Observable::Energy, Observable::Position],
        density_times: vec![1.0],
        density_points: 2001,
        output_path: PathBuf::from("out/custom"),
        spectral: SpectralOptions::default(),
        fd: FdOptions::default(),
    };
    (config, resolutions)
}
