//! Conversion between the document sections and the library types.
//! Every failure here is a configuration error.

use std::sync::Arc;

use mtree_spectral::{Expr, SymmetricPotential, TailRule, TreeDescriptor};

use crate::config::{PotentialConfig, TailConfig, TreeConfig};
use crate::error::CliError;

fn tail_rule(t: &TailConfig) -> TailRule {
    match *t {
        TailConfig::Homogeneous { edge_length, branch } => TailRule::Homogeneous { edge_length, branch },
        TailConfig::Geometric {
            ratio,
            first_length,
            branch,
        } => TailRule::Geometric {
            ratio,
            first_length,
            branch,
        },
        TailConfig::Halfline {} => TailRule::Halfline,
    }
}

pub fn build_tree(c: &TreeConfig) -> Result<TreeDescriptor, CliError> {
    let r = match c {
        TreeConfig::Homogeneous { edge_length, branch } => TreeDescriptor::homogeneous(*edge_length, *branch),
        TreeConfig::Geometric {
            ratio,
            first_length,
            branch,
        } => TreeDescriptor::geometric(*ratio, *first_length, *branch),
        TreeConfig::Halfline {} => Ok(TreeDescriptor::halfline()),
        TreeConfig::Explicit { vertices, tail } => TreeDescriptor::build(vertices, tail_rule(tail)),
    };
    r.map_err(CliError::config)
}

pub fn tree_config(t: &TreeDescriptor) -> TreeConfig {
    let tail = match t.tail() {
        TailRule::Homogeneous { edge_length, branch } => TailConfig::Homogeneous { edge_length, branch },
        TailRule::Geometric {
            ratio,
            first_length,
            branch,
        } => TailConfig::Geometric {
            ratio,
            first_length,
            branch,
        },
        TailRule::Halfline => TailConfig::Halfline {},
    };
    TreeConfig::Explicit {
        vertices: t.prefix(),
        tail,
    }
}

pub fn build_potential(c: &PotentialConfig) -> Result<SymmetricPotential, CliError> {
    match c {
        PotentialConfig::Piecewise { breakpoints, values } => {
            SymmetricPotential::piecewise(breakpoints.clone(), values.clone()).map_err(CliError::config)
        }
        PotentialConfig::Tent {
            center,
            half_width,
            height,
        } => SymmetricPotential::tent(*center, *half_width, *height).map_err(CliError::config),
        PotentialConfig::Expr { expr, support } => {
            let e = Expr::parse(expr).map_err(CliError::config)?;
            let kinks = e.kinks();
            SymmetricPotential::sampled_profile(Arc::new(move |t| e.eval(t)), support[0], support[1], kinks)
                .map_err(CliError::config)
        }
    }
}

/// Document form of a plain piecewise-constant potential.
pub fn potential_config(v: &SymmetricPotential) -> Option<PotentialConfig> {
    v.piecewise_parts().map(|(breakpoints, values)| PotentialConfig::Piecewise { breakpoints, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_round_trip() {
        let t = TreeDescriptor::build(&[(0.5, 2), (1.5, 3)], TailRule::Geometric {
            ratio: 2.0,
            first_length: 1.0,
            branch: 2,
        })
        .unwrap();
        assert_eq!(build_tree(&tree_config(&t)).unwrap(), t);
    }

    #[test]
    fn expression_potential() {
        let v = build_potential(&PotentialConfig::Expr {
            expr: "3*max(0, 1 - abs(t - 1))".into(),
            support: [0.0, 2.0],
        })
        .unwrap();
        assert_eq!(v.value(1.0), 3.0);
        assert_eq!(v.value(2.5), 0.0);
        let bad = build_potential(&PotentialConfig::Expr {
            expr: "3*".into(),
            support: [0.0, 2.0],
        });
        assert!(matches!(bad, Err(CliError::Config(_))));
    }

    #[test]
    fn invalid_tree_is_a_config_error() {
        let e = build_tree(&TreeConfig::Homogeneous { edge_length: 1.0, branch: 1 }).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
