//! Catalog space identifiers, e.g. `CP(2)`, `Gr(2,4)`, `Wedge(2,4)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid space identifier {input:?}: {reason}")]
pub struct ParseSpaceError {
    pub input: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpaceId {
    /// `CP(n)`
    ComplexProjective(u32),
    /// `Gr(k,n)`: complex k-planes in C^n.
    Grassmannian { k: u32, n: u32 },
    /// `Milnor(m,n)`: the hypersurface H_{m,n} in CP^m x CP^n.
    Milnor { m: u32, n: u32 },
    /// `U(n)`
    Unitary(u32),
    /// `S(n)`
    Sphere(u32),
    /// `Wedge(n1,n2,...)`: a wedge of spheres of the listed dimensions.
    Wedge(Vec<u32>),
    /// `Conf(k,n)`: ordered configurations of k points in R^n.
    Conf { k: u32, n: u32 },
    SigmaCP2,
    SigmaHP2,
    /// `Manifold(n,b)`: an (n-1)-connected 2n-manifold with b_n = b.
    Manifold { n: u32, rank: u32 },
    /// `PolyhedralProduct`: a moment-angle complex with two non-disjoint
    /// minimal missing faces.
    PolyhedralProduct,
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SpaceId::*;
        match self {
            ComplexProjective(n) => write!(f, "CP({n})"),
            Grassmannian { k, n } => write!(f, "Gr({k},{n})"),
            Milnor { m, n } => write!(f, "Milnor({m},{n})"),
            Unitary(n) => write!(f, "U({n})"),
            Sphere(n) => write!(f, "S({n})"),
            Wedge(dims) => {
                let parts: Vec<String> = dims.iter().map(u32::to_string).collect();
                write!(f, "Wedge({})", parts.join(","))
            }
            Conf { k, n } => write!(f, "Conf({k},{n})"),
            SigmaCP2 => f.write_str("SigmaCP2"),
            SigmaHP2 => f.write_str("SigmaHP2"),
            Manifold { n, rank } => write!(f, "Manifold({n},{rank})"),
            PolyhedralProduct => f.write_str("PolyhedralProduct"),
        }
    }
}

impl FromStr for SpaceId {
    type Err = ParseSpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParseSpaceError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, args) = match compact.find('(') {
            Some(open) => {
                if !compact.ends_with(')') {
                    return Err(err("missing closing parenthesis"));
                }
                let inner = &compact[open + 1..compact.len() - 1];
                let args = inner
                    .split(',')
                    .map(|a| a.parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| err("arguments must be nonnegative integers"))?;
                (&compact[..open], args)
            }
            None => (compact.as_str(), Vec::new()),
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(&format!("{name} takes {n} argument(s)")))
            }
        };
        let space = match name {
            "CP" => {
                arity(1)?;
                if args[0] < 1 {
                    return Err(err("CP(n) needs n >= 1"));
                }
                SpaceId::ComplexProjective(args[0])
            }
            "Gr" => {
                arity(2)?;
                let (k, n) = (args[0], args[1]);
                if !(0 < k && k < n) {
                    return Err(err("Gr(k,n) needs 0 < k < n"));
                }
                SpaceId::Grassmannian { k, n }
            }
            "Milnor" => {
                arity(2)?;
                let (m, n) = (args[0], args[1]);
                if !(1 <= m && m <= n) {
                    return Err(err("Milnor(m,n) needs 1 <= m <= n"));
                }
                SpaceId::Milnor { m, n }
            }
            "U" => {
                arity(1)?;
                if args[0] < 1 {
                    return Err(err("U(n) needs n >= 1"));
                }
                SpaceId::Unitary(args[0])
            }
            "S" => {
                arity(1)?;
                if args[0] < 1 {
                    return Err(err("S(n) needs n >= 1"));
                }
                SpaceId::Sphere(args[0])
            }
            "Wedge" => {
                if args.is_empty() || args.iter().any(|&d| d < 1) {
                    return Err(err("Wedge needs one or more positive dimensions"));
                }
                SpaceId::Wedge(args)
            }
            "Conf" => {
                arity(2)?;
                let (k, n) = (args[0], args[1]);
                if k < 1 || n < 2 {
                    return Err(err("Conf(k,n) needs k >= 1 and n >= 2"));
                }
                SpaceId::Conf { k, n }
            }
            "Manifold" => {
                arity(2)?;
                if args[0] < 1 {
                    return Err(err("Manifold(n,b) needs n >= 1"));
                }
                SpaceId::Manifold {
                    n: args[0],
                    rank: args[1],
                }
            }
            "SigmaCP2" if args.is_empty() => SpaceId::SigmaCP2,
            "SigmaHP2" if args.is_empty() => SpaceId::SigmaHP2,
            "PolyhedralProduct" if args.is_empty() => SpaceId::PolyhedralProduct,
            _ => return Err(err("unknown space")),
        };
        Ok(space)
    }
}
