//! Independent re-checking of a report's certificates.
//!
//! Nothing here reruns a search: each claim is checked against the subject
//! document with the library's verifier functions.

use opalg::antisymmetry::{
    counterexample_is_valid, is_antisymmetric, is_hereditarily_antisymmetric, witness_is_valid,
};
use opalg::channels::{can_transition, reachability_algebra, validate_channel, KrausChannel};
use opalg::invariant::{compress, is_invariant, SemiInvariantSpec};
use opalg::io::{
    decode_subspace, AlgebraDoc, BasisDoc, ChainDoc, ChannelsDoc, CounterexampleDoc, LatticeDoc, MatrixDoc,
    PartitionDoc, SubspaceDoc, VectorDoc,
};
use opalg::matspan::close_algebra;
use opalg::qposet::{chain_is_valid, chain_partition_is_valid, partition_is_valid, power_filtration};
use opalg::triangular::{jordanesque_check, BlockOrderedBasis};
use opalg::{Error, Mat, OperatorAlgebra, Result, Scalar, Vector};
use serde_json::{Map, Value};

use crate::report::{Report, Status};
use crate::run::parse;

/// Outcome of each named check.
pub struct Findings {
    pub checks: Map<String, Value>,
}

impl Findings {
    fn new() -> Self {
        Findings { checks: Map::new() }
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), Value::Bool(ok));
    }

    pub fn status(&self) -> Status {
        if self.checks.values().all(|v| v == &Value::Bool(true)) {
            Status::Ok
        } else {
            Status::Negative
        }
    }
}

fn field<'a>(r: &'a Report, key: &str) -> Result<&'a Value> {
    r.verdicts
        .get(key)
        .filter(|v| !v.is_null())
        .ok_or_else(|| Error::Parse(format!("report has no `{key}` verdict")))
}

fn subject(r: &Report) -> Result<&Value> {
    r.subject
        .as_ref()
        .ok_or_else(|| Error::Parse("report has no subject".into()))
}

fn subject_algebra<S: Scalar>(r: &Report) -> Result<OperatorAlgebra<S>> {
    parse::<AlgebraDoc>(subject(r)?)?.decode()
}

fn subject_channels<S: Scalar>(r: &Report) -> Result<Vec<KrausChannel<S>>> {
    parse::<ChannelsDoc>(subject(r)?)?.decode()
}

fn flag(r: &Report, key: &str) -> Result<bool> {
    field(r, key)?
        .as_bool()
        .ok_or_else(|| Error::Parse(format!("`{key}` is not a boolean")))
}

fn count(r: &Report, key: &str) -> Result<usize> {
    field(r, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("`{key}` is not a count")))
}

pub fn verify<S: Scalar>(r: &Report) -> Result<Findings> {
    let mut f = Findings::new();
    if matches!(r.status, Status::Error | Status::Unknown) {
        return Err(Error::Precondition(format!(
            "a report with status {:?} carries no certificate",
            r.status
        )));
    }
    match r.command.as_str() {
        "close" | "channels reach" | "family tn" | "family dv" | "family jv" | "family preorder" => {
            let artifact = r
                .artifact
                .as_ref()
                .ok_or_else(|| Error::Parse("report has no artifact".into()))?;
            // Decoding rebuilds any family tag and rejects a mismatch.
            let a: OperatorAlgebra<S> = parse::<AlgebraDoc>(artifact)?.decode()?;
            f.check("artifact_closed", a.span().is_product_stable());
            f.check("dim", a.dim() == count(r, "dim")?);
            match r.command.as_str() {
                "close" => {
                    let b: OperatorAlgebra<S> = subject_algebra(r)?;
                    f.check("same_algebra", a.span().same(b.span()));
                }
                "channels reach" => {
                    let cs = subject_channels::<S>(r)?;
                    let mut ok = a.is_unital();
                    for c in &cs {
                        ok &= c.kraus.iter().all(|k| a.contains(k));
                    }
                    let gens: Vec<Mat<S>> = cs.iter().flat_map(|c| c.kraus.iter().cloned()).collect();
                    let b = close_algebra(a.n(), &gens, true)?;
                    f.check("contains_kraus", ok);
                    f.check("same_algebra", a.span().same(b.span()));
                }
                _ => {}
            }
        }
        "antisym" => {
            let a: OperatorAlgebra<S> = subject_algebra(r)?;
            let claimed = flag(r, "antisymmetric")?;
            if claimed {
                f.check("antisymmetric", is_antisymmetric(&a).antisymmetric);
            } else {
                let w: Mat<S> = parse::<MatrixDoc>(field(r, "witness")?)?.decode()?;
                f.check("witness", witness_is_valid(a.span(), &Mat::identity(a.n()), &w));
            }
        }
        "hereditary" => {
            let a: OperatorAlgebra<S> = subject_algebra(r)?;
            if r.status == Status::Negative {
                let cx = parse::<CounterexampleDoc>(field(r, "counterexample")?)?.decode()?;
                f.check("counterexample", counterexample_is_valid(&a, &cx));
            } else {
                let lat = parse::<LatticeDoc>(field(r, "lattice")?)?.decode::<S>()?;
                f.check("lattice_complete", lat.complete);
                f.check(
                    "lattice_invariant",
                    lat.subspaces.iter().all(|e| is_invariant(&a, e)),
                );
                let v = is_hereditarily_antisymmetric(&a, &lat.subspaces, lat.complete)?;
                f.check("no_counterexample", v.counterexample.is_none());
            }
        }
        "triangularize" => {
            let a: OperatorAlgebra<S> = subject_algebra(r)?;
            if r.status == Status::Negative {
                let sub = |k: &str| -> Result<_> {
                    decode_subspace::<S>(a.n(), &parse::<SubspaceDoc>(field(r, k)?)?)
                };
                match SemiInvariantSpec::new(&a, sub("e1")?, sub("e2")?) {
                    Ok(spec) => {
                        let c = compress(&a, &spec)?;
                        f.check("semi_invariant", true);
                        f.check("compression_full", c.is_full());
                        f.check("support_dim_at_least_2", spec.e.dim() >= 2);
                    }
                    Err(_) => f.check("semi_invariant", false),
                }
            } else {
                let v: Vec<Vector<S>> = parse::<BasisDoc>(field(r, "basis")?)?.vectors()?;
                let b = BlockOrderedBasis::singletons(v)?;
                let mut ok = true;
                for m in a.basis() {
                    ok &= b.matrix_in_basis(m)?.is_upper_triangular();
                }
                f.check("upper_triangular", ok);
            }
        }
        "jordanesque" => {
            let a: OperatorAlgebra<S> = subject_algebra(r)?;
            let b = parse::<BasisDoc>(field(r, "basis")?)?.decode::<S>()?;
            let mut ok = true;
            for m in a.basis() {
                ok &= jordanesque_check(m, &b)?.ok;
            }
            f.check("jordanesque", ok);
        }
        "idempotent" => {
            let a: Mat<S> = parse::<MatrixDoc>(subject(r)?)?.decode()?;
            let p: Mat<S> = parse::<MatrixDoc>(field(r, "idempotent")?)?.decode()?;
            let generated = close_algebra(a.rows(), std::slice::from_ref(&a), false)?;
            f.check("idempotent", (&p * &p).approx_eq(&p));
            f.check("commutes", (&a * &p).approx_eq(&(&p * &a)));
            f.check("in_generated_algebra", generated.contains(&p));
        }
        "qposet chains" | "qposet mirsky" => {
            let a: OperatorAlgebra<S> = subject_algebra(r)?;
            let c = parse::<ChainDoc>(field(r, "chain")?)?.decode::<S>()?;
            let rr = power_filtration(&a)?.nilpotency_index;
            f.check("chain_valid", chain_is_valid(&a, &c));
            f.check("chain_length", c.len() == rr && count(r, "r")? == rr);
            if r.command == "qposet mirsky" {
                for key in ["top_down", "bottom_up"] {
                    let p = parse::<PartitionDoc>(field(r, key)?)?.decode::<S>()?;
                    f.check(key, partition_is_valid(&a, &p) && p.size() == rr);
                }
            }
        }
        "qposet antichains" => {
            let a: OperatorAlgebra<S> = subject_algebra(r)?;
            for key in ["top_down", "bottom_up"] {
                let p = parse::<PartitionDoc>(field(r, key)?)?.decode::<S>()?;
                f.check(key, partition_is_valid(&a, &p));
            }
        }
        "qposet dilworth" => {
            let a: OperatorAlgebra<S> = subject_algebra(r)?;
            let chains = field(r, "chains")?
                .as_array()
                .ok_or_else(|| Error::Parse("`chains` is not a list".into()))?
                .iter()
                .map(|c| parse::<ChainDoc>(c)?.decode::<S>())
                .collect::<Result<Vec<_>>>()?;
            let width = power_filtration(&a)?.block_dims().into_iter().max().unwrap_or(0);
            f.check("partition_valid", chain_partition_is_valid(&a, &chains));
            f.check("within_bound", chains.len() <= width);
        }
        "channels validate" => {
            let docs = match parse::<ChannelsDoc>(subject(r)?)? {
                ChannelsDoc::One(c) => vec![c],
                ChannelsDoc::Many(cs) => cs,
            };
            let mut all = true;
            for d in &docs {
                let kraus = d
                    .kraus
                    .iter()
                    .map(|k| k.decode())
                    .collect::<Result<Vec<Mat<S>>>>()?;
                all &= validate_channel(kraus).is_ok();
            }
            f.check("all_valid", all == flag(r, "all_valid")?);
        }
        "channels transition" => {
            let cs = subject_channels::<S>(r)?;
            let reach = reachability_algebra(&cs)?;
            let v: Vector<S> = parse::<VectorDoc>(field(r, "from")?)?.decode()?;
            let w: Vector<S> = parse::<VectorDoc>(field(r, "to")?)?.decode()?;
            let possible = flag(r, "possible")?;
            match r.verdicts.get("witness").filter(|x| !x.is_null()) {
                Some(doc) => {
                    let x: Mat<S> = parse::<MatrixDoc>(doc)?.decode()?;
                    let image = x.mul_vec(&v);
                    f.check("witness_reachable", reach.algebra.contains(&x));
                    f.check("witness_overlaps", !w.inner(&image).is_negligible(x.frobenius()));
                }
                None if r.verdicts.get("lift").is_some_and(|l| !l.is_null()) => {
                    return Err(Error::Unsupported(
                        "lifted transitions carry no certificate".into(),
                    ));
                }
                None => f.check("impossible", !possible && !can_transition(&reach, &v, &w)?),
            }
        }
        "channels traps" => {
            let cs = subject_channels::<S>(r)?;
            let reach = reachability_algebra(&cs)?;
            let lat = parse::<LatticeDoc>(field(r, "traps")?)?.decode::<S>()?;
            f.check(
                "traps_invariant",
                lat.subspaces.iter().all(|e| is_invariant(&reach.algebra, e)),
            );
        }
        other => return Err(Error::Unsupported(format!("nothing to verify for `{other}`"))),
    }
    Ok(f)
}
