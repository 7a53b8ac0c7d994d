//! Command execution, generic over the scalar backend.

use opalg::antisymmetry::{is_antisymmetric, is_hereditarily_antisymmetric, Verdict};
use opalg::channels::{
    can_transition_lifted, reachability_algebra, transition_witness, trap_subspaces, validate_channel,
    KrausChannel,
};
use opalg::families::{is_connected, make_dv, make_jv, make_preorder_algebra, make_tn, nonorth_graph};
use opalg::invariant::invariant_lattice;
use opalg::io::{
    encode_subspace, AlgebraDoc, BasisDoc, ChainDoc, ChannelsDoc, CounterexampleDoc, LatticeDoc, MatrixDoc,
    PartitionDoc, PreorderDoc, VectorDoc,
};
use opalg::linalg::spectrum;
use opalg::matspan::close_algebra;
use opalg::qposet::{
    bottom_up_partition, dilworth_chain_partition, max_coordinate_antichain, max_quantum_chain,
    power_filtration, top_down_partition,
};
use opalg::triangular::{
    idempotent_polynomial, jordanesque_basis, jordanesque_check, upper_triangularize, Triangularization,
};
use opalg::{Error, Mat, OperatorAlgebra, Result, Scalar, Vector};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::report::Status;

#[derive(Clone, Debug)]
pub enum Task {
    Close,
    Antisym,
    Hereditary,
    Triangularize,
    Jordanesque,
    Idempotent {
        lambda: String,
    },
    FamilyTn {
        n: usize,
    },
    FamilyDv,
    FamilyJv,
    FamilyPreorder {
        basis: Option<Value>,
    },
    Chains,
    Antichains,
    Mirsky,
    Dilworth,
    ChannelsValidate,
    ChannelsReach,
    ChannelsTransition {
        from: Value,
        to: Value,
        lift: Option<usize>,
    },
    ChannelsTraps,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Close => "close",
            Task::Antisym => "antisym",
            Task::Hereditary => "hereditary",
            Task::Triangularize => "triangularize",
            Task::Jordanesque => "jordanesque",
            Task::Idempotent { .. } => "idempotent",
            Task::FamilyTn { .. } => "family tn",
            Task::FamilyDv => "family dv",
            Task::FamilyJv => "family jv",
            Task::FamilyPreorder { .. } => "family preorder",
            Task::Chains => "qposet chains",
            Task::Antichains => "qposet antichains",
            Task::Mirsky => "qposet mirsky",
            Task::Dilworth => "qposet dilworth",
            Task::ChannelsValidate => "channels validate",
            Task::ChannelsReach => "channels reach",
            Task::ChannelsTransition { .. } => "channels transition",
            Task::ChannelsTraps => "channels traps",
        }
    }

    pub fn needs_input(&self) -> bool {
        !matches!(self, Task::FamilyTn { .. })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub budget: usize,
}

pub struct Outcome {
    pub status: Status,
    pub detail: Option<String>,
    pub verdicts: Map<String, Value>,
    pub artifact: Option<Value>,
}

impl Outcome {
    fn ok(verdicts: Map<String, Value>) -> Self {
        Outcome {
            status: Status::Ok,
            detail: None,
            verdicts,
            artifact: None,
        }
    }

    fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        if status == Status::Unknown {
            self.detail = Some("undecided".into());
        }
        self
    }

    fn with_artifact<T: Serialize>(mut self, doc: &T) -> Self {
        self.artifact = Some(to_value(doc));
        self
    }
}

pub fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

pub fn parse<T: DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
}

fn mat<S: Scalar>(m: &Mat<S>) -> Value {
    to_value(&MatrixDoc::encode(m))
}

fn algebra<S: Scalar>(input: &Value) -> Result<OperatorAlgebra<S>> {
    parse::<AlgebraDoc>(input)?.decode()
}

/// A vector given as a bare entry list or as a vector document.
pub fn vector_arg<S: Scalar>(v: &Value) -> Result<Vector<S>> {
    let doc = match v {
        Value::Array(entries) => VectorDoc {
            n: entries.len(),
            entries: entries.clone(),
        },
        other => parse(other)?,
    };
    doc.decode()
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Unknown => "unknown",
    }
}

macro_rules! verdicts {
    ($($k:literal: $v:expr),* $(,)?) => {{
        let mut m = Map::new();
        $(m.insert($k.to_string(), json!($v));)*
        m
    }};
}

pub fn execute<S: Scalar>(task: &Task, input: Option<&Value>, ctx: Ctx) -> Result<Outcome> {
    let input = || input.ok_or_else(|| Error::InvalidInput("this command needs an input document".into()));
    match task {
        Task::Close => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            Ok(Outcome::ok(verdicts! {
                "n": a.n(),
                "unital": a.is_unital(),
                "dim": a.dim(),
                "full": a.is_full(),
            })
            .with_artifact(&AlgebraDoc::encode(&a)))
        }
        Task::Antisym => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            let r = is_antisymmetric(&a);
            let status = if r.antisymmetric {
                Status::Ok
            } else {
                Status::Negative
            };
            Ok(Outcome::ok(verdicts! {
                "antisymmetric": r.antisymmetric,
                "dim": a.dim(),
                "witness": r.witness.as_ref().map(mat),
                "method_notes": r.method_notes,
            })
            .with_status(status))
        }
        Task::Hereditary => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            let lat = invariant_lattice(&a, ctx.seed, ctx.budget);
            let v = is_hereditarily_antisymmetric(&a, &lat.subspaces, lat.complete)?;
            let status = match v.status {
                Verdict::Yes => Status::Ok,
                Verdict::No => Status::Negative,
                Verdict::Unknown => Status::Unknown,
            };
            Ok(Outcome::ok(verdicts! {
                "verdict": verdict_name(v.status),
                "lattice_complete": v.lattice_complete,
                "pairs_checked": v.pairs_checked,
                "lattice": to_value(&LatticeDoc::encode(a.n(), &lat)),
                "counterexample": v.counterexample.as_ref().map(|c| to_value(&CounterexampleDoc::encode(c))),
            })
            .with_status(status))
        }
        Task::Triangularize => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            let lat = invariant_lattice(&a, ctx.seed, ctx.budget);
            Ok(match upper_triangularize(&a, Some(&lat), ctx.seed, ctx.budget)? {
                Triangularization::Basis(b) => Outcome::ok(verdicts! {
                    "outcome": "basis",
                    "basis": to_value(&BasisDoc::encode_plain(&b)),
                }),
                Triangularization::Obstruction(spec) => {
                    let c = opalg::invariant::compress(&a, &spec)?;
                    Outcome::ok(verdicts! {
                        "outcome": "obstruction",
                        "e1": to_value(&encode_subspace(&spec.e1)),
                        "e2": to_value(&encode_subspace(&spec.e2)),
                        "e": to_value(&encode_subspace(&spec.e)),
                        "support_dim": spec.e.dim(),
                        "compressed_dim": c.dim(),
                    })
                    .with_status(Status::Negative)
                }
                Triangularization::Unknown => {
                    Outcome::ok(verdicts! { "outcome": "unknown" }).with_status(Status::Unknown)
                }
            })
        }
        Task::Jordanesque => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            let b = jordanesque_basis(&a, ctx.seed, ctx.budget)?;
            let mut all = true;
            for m in a.basis() {
                all &= jordanesque_check(m, &b)?.ok;
            }
            let doc = BasisDoc::encode(&b);
            Ok(Outcome::ok(verdicts! {
                "block_sizes": b.block_sizes(),
                "basis": to_value(&doc),
                "all_jordanesque": all,
            })
            .with_status(if all { Status::Ok } else { Status::Error })
            .with_artifact(&doc))
        }
        Task::Idempotent { lambda } => {
            let a: Mat<S> = parse::<MatrixDoc>(input()?)?.decode()?;
            let lambda = S::from_entry(&Value::String(lambda.clone()))?;
            let spec = spectrum(&a)?;
            let p = idempotent_polynomial(&a, &lambda, &spec)?;
            let generated = close_algebra(a.rows(), std::slice::from_ref(&a), false)?;
            let eigenvalues: Vec<Value> = spec
                .values
                .iter()
                .map(|(v, m)| json!({ "value": v.to_entry(), "multiplicity": m }))
                .collect();
            Ok(Outcome::ok(verdicts! {
                "lambda": lambda.to_entry(),
                "eigenvalues": eigenvalues,
                "idempotent": mat(&p),
                "rank": p.rank(),
                "idempotent_holds": (&p * &p).approx_eq(&p),
                "commutes": (&a * &p).approx_eq(&(&p * &a)),
                "in_generated_algebra": generated.contains(&p),
            })
            .with_artifact(&MatrixDoc::encode(&p)))
        }
        Task::FamilyTn { n } => family_outcome(&make_tn::<S>(*n), Map::new()),
        Task::FamilyDv => {
            let v: Vec<Vector<S>> = parse::<BasisDoc>(input()?)?.vectors()?;
            let a = make_dv(&v)?;
            family_outcome(&a, verdicts! { "connected": is_connected(&nonorth_graph(&v)) })
        }
        Task::FamilyJv => {
            let b = parse::<BasisDoc>(input()?)?.decode::<S>()?;
            family_outcome(&make_jv(&b)?, verdicts! { "block_sizes": b.block_sizes() })
        }
        Task::FamilyPreorder { basis } => {
            let p = parse::<PreorderDoc>(input()?)?.decode()?;
            let v: Vec<Vector<S>> = match basis {
                Some(b) => parse::<BasisDoc>(b)?.vectors()?,
                None => (0..p.n()).map(|i| Vector::unit(p.n(), i)).collect(),
            };
            family_outcome(&make_preorder_algebra(&p, &v)?, Map::new())
        }
        Task::Chains => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            let r = power_filtration(&a)?.nilpotency_index;
            let c = max_quantum_chain(&a, ctx.seed)?;
            Ok(Outcome::ok(verdicts! {
                "r": r,
                "length": c.len(),
                "chain": to_value(&ChainDoc::encode(&c)),
            }))
        }
        Task::Antichains => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            let f = power_filtration(&a)?;
            let td = top_down_partition(&a)?;
            let bu = bottom_up_partition(&a)?;
            let dims = f.block_dims();
            let coordinate = match max_coordinate_antichain(&a) {
                Ok(idx) => json!(idx),
                Err(Error::GuardExceeded { .. }) => Value::Null,
                Err(e) => return Err(e),
            };
            Ok(Outcome::ok(verdicts! {
                "r": f.nilpotency_index,
                "block_dims": dims,
                "width_lower_bound": dims.iter().copied().max().unwrap_or(0),
                "max_coordinate_antichain": coordinate,
                "top_down": to_value(&PartitionDoc::encode(a.n(), &td)),
                "bottom_up": to_value(&PartitionDoc::encode(a.n(), &bu)),
            }))
        }
        Task::Mirsky => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            let r = power_filtration(&a)?.nilpotency_index;
            let c = max_quantum_chain(&a, ctx.seed)?;
            let td = top_down_partition(&a)?;
            let bu = bottom_up_partition(&a)?;
            let equal = c.len() == r && td.size() == r && bu.size() == r;
            let mut out = Outcome::ok(verdicts! {
                "r": r,
                "chain_length": c.len(),
                "top_down_size": td.size(),
                "bottom_up_size": bu.size(),
                "equal": equal,
                "chain": to_value(&ChainDoc::encode(&c)),
                "top_down": to_value(&PartitionDoc::encode(a.n(), &td)),
                "bottom_up": to_value(&PartitionDoc::encode(a.n(), &bu)),
            });
            if !equal {
                out.status = Status::Error;
                out.detail = Some("internal".into());
            }
            Ok(out)
        }
        Task::Dilworth => {
            let a: OperatorAlgebra<S> = algebra(input()?)?;
            let dp = dilworth_chain_partition(&a, ctx.seed, ctx.budget)?;
            let chains: Vec<Value> = dp.chains.iter().map(|c| to_value(&ChainDoc::encode(c))).collect();
            Ok(Outcome::ok(verdicts! {
                "chain_count": dp.chains.len(),
                "bound": dp.bound,
                "construction_size": dp.construction_size,
                "chains": chains,
            }))
        }
        Task::ChannelsValidate => {
            let docs = match parse::<ChannelsDoc>(input()?)? {
                ChannelsDoc::One(c) => vec![c],
                ChannelsDoc::Many(cs) => cs,
            };
            let mut results = Vec::new();
            let mut all = true;
            for d in &docs {
                let kraus = d
                    .kraus
                    .iter()
                    .map(|k| k.decode())
                    .collect::<Result<Vec<Mat<S>>>>()?;
                let (valid, residual) = match validate_channel(kraus) {
                    Ok(c) => (true, c.cptp_residual),
                    Err(Error::CptpViolation(r)) => (false, r),
                    Err(e) => return Err(e),
                };
                all &= valid;
                results
                    .push(json!({ "valid": valid, "cptp_residual": residual, "kraus_count": d.kraus.len() }));
            }
            Ok(
                Outcome::ok(verdicts! { "all_valid": all, "channels": results }).with_status(if all {
                    Status::Ok
                } else {
                    Status::Negative
                }),
            )
        }
        Task::ChannelsReach => {
            let cs: Vec<KrausChannel<S>> = parse::<ChannelsDoc>(input()?)?.decode()?;
            let r = reachability_algebra(&cs)?;
            Ok(Outcome::ok(verdicts! {
                "n": r.algebra.n(),
                "dim": r.algebra.dim(),
                "full": r.algebra.is_full(),
            })
            .with_artifact(&AlgebraDoc::encode(&r.algebra)))
        }
        Task::ChannelsTransition { from, to, lift } => {
            let cs: Vec<KrausChannel<S>> = parse::<ChannelsDoc>(input()?)?.decode()?;
            let r = reachability_algebra(&cs)?;
            let v: Vector<S> = vector_arg(from)?;
            let w: Vector<S> = vector_arg(to)?;
            let (possible, witness) = match lift {
                Some(k) => (can_transition_lifted(&r, *k, &v, &w)?, None),
                None => {
                    let wit = transition_witness(&r, &v, &w)?;
                    (wit.is_some(), wit)
                }
            };
            Ok(Outcome::ok(verdicts! {
                "possible": possible,
                "lift": lift,
                "from": to_value(&VectorDoc::encode(&v)),
                "to": to_value(&VectorDoc::encode(&w)),
                "witness": witness.as_ref().map(mat),
            })
            .with_status(if possible { Status::Ok } else { Status::Negative }))
        }
        Task::ChannelsTraps => {
            let cs: Vec<KrausChannel<S>> = parse::<ChannelsDoc>(input()?)?.decode()?;
            let r = reachability_algebra(&cs)?;
            let lat = trap_subspaces(&r, ctx.seed, ctx.budget);
            let nontrivial = lat
                .subspaces
                .iter()
                .filter(|e| !e.is_zero() && !e.is_full())
                .count();
            Ok(Outcome::ok(verdicts! {
                "nontrivial": nontrivial,
                "complete": lat.complete,
                "traps": to_value(&LatticeDoc::encode(r.algebra.n(), &lat)),
            }))
        }
    }
}

fn family_outcome<S: Scalar>(a: &OperatorAlgebra<S>, mut extra: Map<String, Value>) -> Result<Outcome> {
    let mut v = verdicts! {
        "family": a.provenance().kind(),
        "n": a.n(),
        "dim": a.dim(),
    };
    v.append(&mut extra);
    Ok(Outcome::ok(v).with_artifact(&AlgebraDoc::encode(a)))
}

/// Short machine-readable class of an error.
pub fn error_detail(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) | Error::DimensionMismatch { .. } | Error::InvalidInput(_) => "parse",
        Error::GuardExceeded { .. } => "guard",
        Error::BudgetExhausted(_) => "budget",
        Error::ConstructionFailure(_) => "internal",
        _ => "precondition",
    }
}
