//! Flag sets reproducing the published figures.

use merodyn_core::map::lambda_star;
use merodyn_core::orbits::SeedRule;
use merodyn_core::render::Window;

use crate::args::{
    BifurcationArgs, CobwebArgs, Command, CyclesArgs, Figure, JuliaArgs, LyapunovArgs, ModeArg,
    PaletteArg, Range,
};

pub const JULIA_LAMBDAS: [(char, f64); 4] = [('a', 0.9), ('b', 1.1), ('c', 9.93), ('d', 9.94)];

fn cobweb(lambda: f64, n: usize, seeds: &[f64]) -> Command {
    Command::Cobweb(CobwebArgs {
        lambda,
        seeds: seeds.to_vec(),
        seed_rule: SeedRule::CriticalPoint,
        n,
    })
}

fn julia(lambda: f64, size: usize) -> Command {
    Command::Julia(JuliaArgs {
        lambda,
        window: Window::unit_square(),
        n: 250,
        size,
        width: None,
        height: None,
        escape_bound: 1e8,
        conv_eps: 1e-6,
        mode: ModeArg::AttractorAware,
        palette: PaletteArg::RedWhite,
    })
}

/// Panels of a figure as `(label, command)`; single-panel figures have one.
pub fn panels(fig: Figure, julia_size: usize) -> Vec<(String, Command)> {
    let label = |c: Option<char>| match c {
        Some(c) => format!("{}{c}", fig.number),
        None => fig.number.to_string(),
    };
    let all: Vec<(Option<char>, Command)> = match fig.number {
        1 => vec![(
            None,
            Command::Cycles(CyclesArgs {
                lambda: 12.0,
                period: 2,
                interval: Range {
                    min: 0.0,
                    max: 10.0,
                },
                grid: 100_000,
                tol: 1e-12,
            }),
        )],
        2 => vec![(None, cobweb(0.9, 10, &[0.05, -0.3]))],
        3 => vec![(None, cobweb(1.0, 20, &[0.4, -0.2]))],
        4 => vec![(None, cobweb(1.1, 10, &[0.03, 0.06, -0.25]))],
        5 => vec![
            (Some('a'), cobweb(lambda_star(), 200, &[0.5])),
            (Some('b'), cobweb(11.0, 50, &[0.2])),
        ],
        6 => vec![(None, cobweb(11.0, 50, &[1.6]))],
        7 => vec![(
            None,
            Command::Bifurcation(BifurcationArgs {
                lambda_range: Range {
                    min: 0.2,
                    max: 15.0,
                },
                steps: 500,
                transient: 100_000,
                samples: 64,
                seed_rule: SeedRule::CriticalPoint,
            }),
        )],
        8 => vec![(
            None,
            Command::Lyapunov(LyapunovArgs {
                lambda: None,
                lambda_range: Some(Range {
                    min: 10.0,
                    max: 45.0,
                }),
                steps: 200,
                k: 2000,
                burn_in: 0,
                seed_rule: SeedRule::CriticalPoint,
            }),
        )],
        9 => JULIA_LAMBDAS
            .iter()
            .map(|&(c, l)| (Some(c), julia(l, julia_size)))
            .collect(),
        _ => Vec::new(),
    };
    all.into_iter()
        .filter(|(c, _)| fig.panel.is_none() || *c == fig.panel)
        .map(|(c, cmd)| (label(c), cmd))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_has_panels() {
        for id in [
            "1", "2", "3", "4", "5", "5a", "5b", "6", "7", "8", "9", "9a", "9b", "9c", "9d",
        ] {
            let fig: Figure = id.parse().unwrap();
            let p = panels(fig, 100);
            assert!(!p.is_empty(), "{id}");
            if fig.panel.is_some() {
                assert_eq!(p.len(), 1);
                assert_eq!(p[0].0, id);
            }
        }
        assert_eq!(panels("9".parse().unwrap(), 100).len(), 4);
    }
}
