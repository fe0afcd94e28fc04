//! JSON wire formats for instances (group, complex, transitions, pairing)
//! and class representatives.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{CohomologyPairing, GrMatrix, PerfectGComplex};
use crate::cyclo::Cyclo;
use crate::det_lines::ComplexJson;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{FiniteGroup, GroupJson, GroupRingElem};
use crate::matrix::Matrix;
use crate::rational::Rational;

type Q = Rational;

/// Exact scalars: "p/q" strings when rational, cyclotomic objects otherwise.
pub mod exact {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Rational(Rational),
        Cyclo(Cyclo),
    }

    pub fn serialize<S: Serializer>(x: &Cyclo, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x.as_rational() {
            Some(q) => q.serialize(s),
            None => x.serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Cyclo, D::Error> {
        Ok(match Wire::deserialize(d)? {
            Wire::Rational(q) => Cyclo::rational(q),
            Wire::Cyclo(c) => c,
        })
    }
}

/// A catalog name or an explicit multiplication table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Table(GroupJson),
}

impl GroupSpec {
    pub fn resolve(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Name(n) => FiniteGroup::catalog(n),
            GroupSpec::Table(t) => FiniteGroup::from_json(t),
        }
    }
}

/// Group-ring element: coefficients indexed by group element.
pub type GroupRingJson = Vec<Q>;
pub type GrMatrixJson = Vec<Vec<GroupRingJson>>;

/// Cocycle representatives per degree (lists of Q-coordinate vectors) and
/// the forms on H^ev, H^odd in the order 0, 2, -2, … and 1, -1, 3, ….
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingJson {
    pub cocycles: Vec<Vec<Vec<Q>>>,
    pub sigma_ev: Vec<Vec<Q>>,
    pub sigma_odd: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceJson {
    pub group: GroupSpec,
    pub complex: ComplexJson<GroupRingJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<Vec<GrMatrixJson>>,
    pub pairing: PairingJson,
}

fn gr_from_json(g: &FiniteGroup, rows: usize, cols: usize, m: &GrMatrixJson, what: &str) -> Result<GrMatrix> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::parse(format!("{what}: expected a {rows}×{cols} group-ring matrix")));
    }
    let mut out = GrMatrix::zeros(g, rows, cols);
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.len() != g.order() {
                return Err(Error::parse(format!("{what}: group-ring entries need {} coefficients", g.order())));
            }
            out.entries[i][j] = GroupRingElem { coeffs: e.clone() };
        }
    }
    Ok(out)
}

fn gr_to_json(m: &GrMatrix) -> GrMatrixJson {
    m.entries.iter().map(|r| r.iter().map(|e| e.coeffs.clone()).collect()).collect()
}

fn square_from_json(m: &[Vec<Q>], what: &str) -> Result<Matrix<Q>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::parse(format!("{what} must be square")));
    }
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    Matrix::from_rows(m.to_vec()).map_err(|e| Error::parse(e.to_string()))
}

fn rows_to_json(m: &Matrix<Q>) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

impl InstanceJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))
    }

    /// Build and validate. A nonzero ∂² is reported as `NotAComplex(degree)`.
    pub fn build(&self) -> Result<(PerfectGComplex, CohomologyPairing)> {
        let g = self.group.resolve()?;
        let c = &self.complex;
        if c.hi < c.lo || c.ranks.len() as i64 != c.hi - c.lo + 1 {
            return Err(Error::parse("ranks must cover lo..=hi"));
        }
        if c.boundaries.len() + 1 != c.ranks.len() {
            return Err(Error::parse("expected one boundary between consecutive degrees"));
        }
        let bs = c
            .boundaries
            .iter()
            .enumerate()
            .map(|(k, m)| gr_from_json(&g, c.ranks[k], c.ranks[k + 1], m, &format!("boundary in degree {}", c.lo + k as i64)))
            .collect::<Result<Vec<_>>>()?;
        let mut p = PerfectGComplex::new(g.clone(), c.lo, c.ranks.clone(), bs)?;
        if let Some(ts) = &self.transitions {
            if ts.len() != c.ranks.len() {
                return Err(Error::parse("expected one transition per degree"));
            }
            let ls = ts
                .iter()
                .enumerate()
                .map(|(k, m)| gr_from_json(&g, c.ranks[k], c.ranks[k], m, &format!("transition in degree {}", c.lo + k as i64)))
                .collect::<Result<Vec<_>>>()?;
            p = p.with_transitions(ls)?;
        }
        let s = &self.pairing;
        if s.cocycles.len() != c.ranks.len() {
            return Err(Error::parse("expected a cocycle list per degree"));
        }
        let reps = p
            .degrees()
            .zip(&s.cocycles)
            .map(|(t, cols)| {
                let n = p.dim(t);
                if cols.iter().any(|v| v.len() != n) {
                    return Err(Error::parse(format!("cocycles in degree {t} must have length {n}")));
                }
                Ok(Matrix::from_columns(n, cols))
            })
            .collect::<Result<Vec<_>>>()?;
        let pairing = CohomologyPairing {
            lo: c.lo,
            reps,
            sigma_ev: square_from_json(&s.sigma_ev, "sigma_ev")?,
            sigma_odd: square_from_json(&s.sigma_odd, "sigma_odd")?,
        };
        pairing.validate(&p)?;
        Ok((p, pairing))
    }

    pub fn from_instance(p: &PerfectGComplex, s: &CohomologyPairing) -> Self {
        InstanceJson {
            group: GroupSpec::Name(p.group.name().to_string()),
            complex: ComplexJson { lo: p.lo, hi: p.hi(), ranks: p.ranks.clone(), boundaries: p.boundaries.iter().map(gr_to_json).collect() },
            transitions: p.transitions.as_ref().map(|ts| ts.iter().map(gr_to_json).collect()),
            pairing: PairingJson {
                cocycles: s.reps.iter().map(|m| m.columns()).collect(),
                sigma_ev: rows_to_json(&s.sigma_ev),
                sigma_odd: rows_to_json(&s.sigma_odd),
            },
        }
    }
}

pub fn load_instance(text: &str) -> Result<(PerfectGComplex, CohomologyPairing)> {
    InstanceJson::parse(text)?.build()
}

pub fn instance_to_string(p: &PerfectGComplex, s: &CohomologyPairing) -> String {
    serde_json::to_string_pretty(&InstanceJson::from_instance(p, s)).expect("serialisable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_group::chi_hermitian;
    use crate::complex::{random_complex, RandomComplexSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn instance_round_trip() {
        let g = FiniteGroup::catalog("S3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (p, s) = random_complex(&g, &mut rng, RandomComplexSpec::default()).unwrap();
        let text = instance_to_string(&p, &s);
        let (p2, s2) = load_instance(&text).unwrap();
        assert_eq!(p2.ranks, p.ranks);
        assert_eq!(s2, s);
        assert_eq!(chi_hermitian(&p2, &s2).unwrap(), chi_hermitian(&p, &s).unwrap());
    }

    #[test]
    fn nonzero_square_names_degree() {
        let text = r#"{"group":"trivial","complex":{"lo":0,"hi":2,"ranks":[1,1,1],
            "boundaries":[[[["1"]]],[[["2"]]]]},
            "pairing":{"cocycles":[[],[],[]],"sigma_ev":[],"sigma_odd":[]}}"#;
        assert_eq!(load_instance(text).unwrap_err(), Error::NotAComplex(0));
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(load_instance("{"), Err(Error::Parse(_))));
        let text = r#"{"group":"C7x","complex":{"lo":0,"hi":0,"ranks":[1],"boundaries":[]},
            "pairing":{"cocycles":[[]],"sigma_ev":[],"sigma_odd":[]}}"#;
        assert!(matches!(load_instance(text), Err(Error::Parse(_))));
    }

    #[test]
    fn class_representative_wire_format() {
        let g = FiniteGroup::catalog("trivial").unwrap();
        let p = PerfectGComplex::concentrated(&g, 0, 1);
        let s = CohomologyPairing::from_blocks(0, vec![Matrix::identity(1)], |_, _| Matrix::from_ints(1, 1, &[-3]));
        let c = chi_hermitian(&p, &s).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        let e = &v["entries"][0];
        assert_eq!(e["finite"], "1");
        assert_eq!(e["arch_sign"], -1);
        assert_eq!(e["arch_mag_sq"], "9");
        let back: crate::class_group::ClassRepresentative = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
