//! Targets accepted by `sl213 expand`.

use std::str::FromStr;

use sl213::invariants::INF;
use sl213::qseries::{eisenstein, eta_series, j_series, theta_vector13, SeriesContext, SeriesError, ThetaSystem, ZSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    A(usize),
    /// Index 13 is D_∞.
    D(usize),
    G(usize),
    Theta(usize),
    Eta,
    Delta,
    E4,
    E6,
    J,
    /// The normalized polynomial.
    Phi(u32, u32),
    /// The normalized polynomial on the eta-weighted theta vector.
    PhiX(u32, u32),
}

#[derive(Debug, thiserror::Error)]
#[error("unknown expand target {0:?} (try A0..A6, D0..D12, Dinf, G0..G12, a1..a6, eta, Delta, E4, E6, j, Phi:m,n, PhiX:m,n)")]
pub struct UnknownTarget(pub String);

fn index(rest: &str, max: usize) -> Option<usize> {
    let i: usize = rest.parse().ok()?;
    (i <= max && !rest.starts_with('+') && (rest == "0" || !rest.starts_with('0'))).then_some(i)
}

fn pair(rest: &str) -> Option<(u32, u32)> {
    let (m, n) = rest.split_once(',')?;
    Some((m.trim().parse().ok()?, n.trim().parse().ok()?))
}

impl FromStr for Target {
    type Err = UnknownTarget;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || UnknownTarget(s.to_string());
        let t = match s {
            "eta" => Target::Eta,
            "Delta" => Target::Delta,
            "E4" => Target::E4,
            "E6" => Target::E6,
            "j" => Target::J,
            "Dinf" => Target::D(INF),
            _ => {
                if let Some(rest) = s.strip_prefix("PhiX:") {
                    let (m, n) = pair(rest).ok_or_else(unknown)?;
                    Target::PhiX(m, n)
                } else if let Some(rest) = s.strip_prefix("Phi:") {
                    let (m, n) = pair(rest).ok_or_else(unknown)?;
                    Target::Phi(m, n)
                } else if let Some(rest) = s.strip_prefix('A') {
                    Target::A(index(rest, 6).ok_or_else(unknown)?)
                } else if let Some(rest) = s.strip_prefix('D') {
                    Target::D(index(rest, 12).ok_or_else(unknown)?)
                } else if let Some(rest) = s.strip_prefix('G') {
                    Target::G(index(rest, 12).ok_or_else(unknown)?)
                } else if let Some(rest) = s.strip_prefix('a') {
                    let i = index(rest, 6).filter(|&i| i >= 1).ok_or_else(unknown)?;
                    Target::Theta(i - 1)
                } else {
                    return Err(unknown());
                }
            }
        };
        Ok(t)
    }
}

/// Series targets on the order-13 grid, truncated at `order`.
pub fn series(target: Target, order: u32) -> Result<ZSeries, SeriesError> {
    let ctx = SeriesContext::order13(order);
    match target {
        Target::A(i) => Ok(ThetaSystem::new(ctx)?.a_forms[i].clone()),
        Target::D(i) => Ok(ThetaSystem::new(ctx)?.d_forms[i].clone()),
        Target::G(i) => Ok(ThetaSystem::new(ctx)?.g_forms[i].clone()),
        Target::Theta(i) => Ok(theta_vector13(ctx)?.swap_remove(i)),
        Target::Eta => eta_series(ctx),
        Target::Delta => Ok(eta_series(ctx)?.pow(24)),
        Target::E4 => eisenstein(4, ctx),
        Target::E6 => eisenstein(6, ctx),
        Target::J => j_series(ctx),
        Target::Phi(..) | Target::PhiX(..) => unreachable!("handled by the caller"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_targets() {
        assert_eq!("A0".parse::<Target>().unwrap(), Target::A(0));
        assert_eq!("D11".parse::<Target>().unwrap(), Target::D(11));
        assert_eq!("Dinf".parse::<Target>().unwrap(), Target::D(INF));
        assert_eq!("a6".parse::<Target>().unwrap(), Target::Theta(5));
        assert_eq!("Phi:3,0".parse::<Target>().unwrap(), Target::Phi(3, 0));
        assert_eq!("PhiX:0,2".parse::<Target>().unwrap(), Target::PhiX(0, 2));
        for bad in ["A7", "D13", "a0", "G01", "Phi:3", "Phi:x,1", "theta", ""] {
            assert!(bad.parse::<Target>().is_err(), "{bad}");
        }
    }
}
