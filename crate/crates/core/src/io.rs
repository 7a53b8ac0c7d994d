//! JSON documents for matrices, vectors and everything built from them.
//!
//! A scalar entry is either a pair `[re, im]` of decimals or a string such as
//! `"1/2-3/4 i"` for an exact Gaussian rational. The exact backend writes
//! strings and round-trips bit-exactly; the numeric backend writes pairs.
//! Indices (preorder pairs) are 0-based.

use serde::{Deserialize, Serialize};

use crate::antisymmetry::HereditaryCounterexample;
use crate::channels::{validate_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::families;
use crate::families::Preorder;
use crate::invariant::Lattice;
use crate::linalg::{Mat, Subspace, Vector};
use crate::matspan::{close_algebra, OperatorAlgebra, Provenance};
use crate::qposet::{AntichainPartition, QuantumChain};
use crate::scalar::Scalar;
use crate::triangular::BlockOrderedBasis;

/// One scalar: `[re, im]`, a plain number, or an exact string.
pub type Entry = serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    /// Row-major, n rows of n entries.
    pub entries: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorDoc {
    pub n: usize,
    pub entries: Vec<Entry>,
}

impl MatrixDoc {
    pub fn encode<S: Scalar>(m: &Mat<S>) -> Self {
        MatrixDoc {
            n: m.rows(),
            entries: (0..m.rows())
                .map(|i| m.row(i).iter().map(|x| x.to_entry()).collect())
                .collect(),
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<Mat<S>> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::Parse(format!("matrix entries are not {0} × {0}", self.n)));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(S::from_entry).collect::<Result<Vec<S>>>())
            .collect::<Result<Vec<_>>>()?;
        if self.n == 0 {
            return Ok(Mat::zero(0));
        }
        Mat::from_rows(rows)
    }
}

impl VectorDoc {
    pub fn encode<S: Scalar>(v: &Vector<S>) -> Self {
        VectorDoc {
            n: v.dim(),
            entries: v.entries().iter().map(|x| x.to_entry()).collect(),
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<Vector<S>> {
        if self.entries.len() != self.n {
            return Err(Error::Parse(format!(
                "vector has {} entries, expected {}",
                self.entries.len(),
                self.n
            )));
        }
        Ok(Vector(
            self.entries.iter().map(S::from_entry).collect::<Result<_>>()?,
        ))
    }
}

fn encode_vectors<S: Scalar>(vs: &[Vector<S>]) -> Vec<VectorDoc> {
    vs.iter().map(VectorDoc::encode).collect()
}

fn decode_vectors<S: Scalar>(n: usize, docs: &[VectorDoc]) -> Result<Vec<Vector<S>>> {
    docs.iter()
        .map(|d| {
            let v = d.decode()?;
            Error::check_dim(n, v.dim())?;
            Ok(v)
        })
        .collect()
}

/// An algebra as its generators; writing an algebra stores its basis.
///
/// The optional `family` names a structured family whose invariant subspaces
/// are known exactly. Decoding rebuilds the family algebra and rejects the
/// document unless it spans the same space as the generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub n: usize,
    pub unital: bool,
    pub generators: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyDoc {
    Tn,
    Dv {
        basis: Vec<VectorDoc>,
    },
    Jv {
        basis: BasisDoc,
    },
    Preorder {
        preorder: PreorderDoc,
        basis: Vec<VectorDoc>,
    },
}

impl FamilyDoc {
    pub fn encode<S: Scalar>(p: &Provenance<S>) -> Option<Self> {
        match p {
            Provenance::Generic => None,
            Provenance::Tn => Some(FamilyDoc::Tn),
            Provenance::Dv { basis } => Some(FamilyDoc::Dv {
                basis: encode_vectors(basis),
            }),
            Provenance::Jv { basis } => Some(FamilyDoc::Jv {
                basis: BasisDoc::encode(basis),
            }),
            Provenance::PreorderAlg { preorder, basis } => Some(FamilyDoc::Preorder {
                preorder: PreorderDoc::encode(preorder),
                basis: encode_vectors(basis),
            }),
        }
    }

    pub fn build<S: Scalar>(&self, n: usize) -> Result<OperatorAlgebra<S>> {
        match self {
            FamilyDoc::Tn => Ok(families::make_tn(n)),
            FamilyDoc::Dv { basis } => families::make_dv(&decode_vectors(n, basis)?),
            FamilyDoc::Jv { basis } => families::make_jv(&basis.decode()?),
            FamilyDoc::Preorder { preorder, basis } => {
                families::make_preorder_algebra(&preorder.decode()?, &decode_vectors(n, basis)?)
            }
        }
    }
}

impl AlgebraDoc {
    pub fn encode<S: Scalar>(a: &OperatorAlgebra<S>) -> Self {
        AlgebraDoc {
            n: a.n(),
            unital: a.is_unital(),
            generators: a.basis().iter().map(MatrixDoc::encode).collect(),
            family: FamilyDoc::encode(a.provenance()),
        }
    }

    pub fn generators<S: Scalar>(&self) -> Result<Vec<Mat<S>>> {
        self.generators
            .iter()
            .map(|g| {
                let m = g.decode()?;
                Error::check_dim(self.n, m.rows())?;
                Ok(m)
            })
            .collect()
    }

    /// Closes the generators.
    pub fn decode<S: Scalar>(&self) -> Result<OperatorAlgebra<S>> {
        let closed = close_algebra(self.n, &self.generators()?, self.unital)?;
        let Some(family) = &self.family else {
            return Ok(closed);
        };
        let built = family.build::<S>(self.n)?;
        Error::check_dim(self.n, built.n())?;
        if !built.span().same(closed.span()) {
            return Err(Error::InvalidInput(
                "the generators do not span the declared family algebra".into(),
            ));
        }
        Ok(built)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreorderDoc {
    pub n: usize,
    pub pairs: Vec<[usize; 2]>,
}

impl PreorderDoc {
    pub fn encode(p: &Preorder) -> Self {
        PreorderDoc {
            n: p.n(),
            pairs: p.pairs().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    /// Adds the diagonal; rejects relations that are not transitive.
    pub fn decode(&self) -> Result<Preorder> {
        let pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&[i, j]| (i, j)).collect();
        Preorder::from_pairs(self.n, &pairs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub n: usize,
    pub vectors: Vec<VectorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_sizes: Option<Vec<usize>>,
}

impl BasisDoc {
    pub fn encode_plain<S: Scalar>(v: &[Vector<S>]) -> Self {
        BasisDoc {
            n: v.first().map_or(0, |x| x.dim()),
            vectors: encode_vectors(v),
            block_sizes: None,
        }
    }

    pub fn encode<S: Scalar>(b: &BlockOrderedBasis<S>) -> Self {
        BasisDoc {
            n: b.n(),
            vectors: encode_vectors(b.vectors()),
            block_sizes: Some(b.block_sizes().to_vec()),
        }
    }

    pub fn vectors<S: Scalar>(&self) -> Result<Vec<Vector<S>>> {
        decode_vectors(self.n, &self.vectors)
    }

    /// Without block sizes, every vector is its own block.
    pub fn decode<S: Scalar>(&self) -> Result<BlockOrderedBasis<S>> {
        let v = self.vectors()?;
        match &self.block_sizes {
            Some(s) => BlockOrderedBasis::new(v, s.clone()),
            None => BlockOrderedBasis::singletons(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelDoc {
    pub n: usize,
    pub kraus: Vec<MatrixDoc>,
}

/// One channel or a list of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelsDoc {
    One(ChannelDoc),
    Many(Vec<ChannelDoc>),
}

impl ChannelDoc {
    pub fn encode<S: Scalar>(c: &KrausChannel<S>) -> Self {
        ChannelDoc {
            n: c.n,
            kraus: c.kraus.iter().map(MatrixDoc::encode).collect(),
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<KrausChannel<S>> {
        let kraus = self
            .kraus
            .iter()
            .map(|k| k.decode())
            .collect::<Result<Vec<Mat<S>>>>()?;
        let c = validate_channel(kraus)?;
        Error::check_dim(self.n, c.n)?;
        Ok(c)
    }
}

impl ChannelsDoc {
    pub fn decode<S: Scalar>(&self) -> Result<Vec<KrausChannel<S>>> {
        match self {
            ChannelsDoc::One(c) => Ok(vec![c.decode()?]),
            ChannelsDoc::Many(cs) => cs.iter().map(|c| c.decode()).collect(),
        }
    }
}

/// A subspace as a list of basis vectors.
pub type SubspaceDoc = Vec<VectorDoc>;

pub fn encode_subspace<S: Scalar>(e: &Subspace<S>) -> SubspaceDoc {
    encode_vectors(e.basis())
}

pub fn decode_subspace<S: Scalar>(n: usize, doc: &SubspaceDoc) -> Result<Subspace<S>> {
    Subspace::span(n, &decode_vectors(n, doc)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub n: usize,
    pub subspaces: Vec<SubspaceDoc>,
    pub complete: bool,
}

impl LatticeDoc {
    pub fn encode<S: Scalar>(n: usize, l: &Lattice<S>) -> Self {
        LatticeDoc {
            n,
            subspaces: l.subspaces.iter().map(encode_subspace).collect(),
            complete: l.complete,
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<Lattice<S>> {
        Ok(Lattice {
            subspaces: self
                .subspaces
                .iter()
                .map(|s| decode_subspace(self.n, s))
                .collect::<Result<_>>()?,
            complete: self.complete,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainDoc {
    pub vectors: Vec<VectorDoc>,
    pub witnesses: Vec<MatrixDoc>,
}

impl ChainDoc {
    pub fn encode<S: Scalar>(c: &QuantumChain<S>) -> Self {
        ChainDoc {
            vectors: encode_vectors(&c.vectors),
            witnesses: c.witnesses.iter().map(MatrixDoc::encode).collect(),
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<QuantumChain<S>> {
        Ok(QuantumChain {
            vectors: self.vectors.iter().map(|v| v.decode()).collect::<Result<_>>()?,
            witnesses: self.witnesses.iter().map(|m| m.decode()).collect::<Result<_>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub n: usize,
    pub parts: Vec<SubspaceDoc>,
    pub ordered: bool,
}

impl PartitionDoc {
    pub fn encode<S: Scalar>(n: usize, p: &AntichainPartition<S>) -> Self {
        PartitionDoc {
            n,
            parts: p.parts.iter().map(encode_subspace).collect(),
            ordered: p.ordered,
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<AntichainPartition<S>> {
        Ok(AntichainPartition {
            parts: self
                .parts
                .iter()
                .map(|s| decode_subspace(self.n, s))
                .collect::<Result<_>>()?,
            ordered: self.ordered,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    pub n: usize,
    pub e1: SubspaceDoc,
    pub e2: SubspaceDoc,
    pub witness: MatrixDoc,
}

impl CounterexampleDoc {
    pub fn encode<S: Scalar>(cx: &HereditaryCounterexample<S>) -> Self {
        CounterexampleDoc {
            n: cx.e1.ambient(),
            e1: encode_subspace(&cx.e1),
            e2: encode_subspace(&cx.e2),
            witness: MatrixDoc::encode(&cx.compressed_witness),
        }
    }

    pub fn decode<S: Scalar>(&self) -> Result<HereditaryCounterexample<S>> {
        Ok(HereditaryCounterexample {
            e1: decode_subspace(self.n, &self.e1)?,
            e2: decode_subspace(self.n, &self.e2)?,
            compressed_witness: self.witness.decode()?,
        })
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::make_tn;
    use crate::scalar::{Cplx, GaussRat};

    type Q = GaussRat;

    #[test]
    fn exact_matrices_round_trip() {
        let m = Mat::from_fn(2, 2, |i, j| {
            GaussRat::from_ratio(i as i64 + 1, 3) + GaussRat::i() * GaussRat::from_ratio(j as i64 - 1, 7)
        });
        let text = to_json(&MatrixDoc::encode(&m));
        let back: Mat<Q> = from_json::<MatrixDoc>(&text).unwrap().decode().unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn entry_shapes() {
        let doc: MatrixDoc =
            from_json(r#"{"n": 2, "entries": [[1, [0.5, -1]], ["1/3+2 i", "-i"]]}"#).unwrap();
        let m: Mat<Q> = doc.decode().unwrap();
        assert_eq!(m[(0, 1)], "1/2-1 i".parse().unwrap());
        assert_eq!(m[(1, 1)], -GaussRat::i());
        let c: Mat<Cplx> = doc.decode().unwrap();
        assert!((c[(1, 0)].0.re - 1.0 / 3.0).abs() < 1e-15);
        assert!(from_json::<MatrixDoc>(r#"{"n": 2, "entries": [[1]]}"#)
            .unwrap()
            .decode::<Q>()
            .is_err());
        assert!(from_json::<MatrixDoc>("{").is_err());
    }

    #[test]
    fn structured_documents_round_trip() {
        let a = make_tn::<Q>(3);
        let back: OperatorAlgebra<Q> = AlgebraDoc::encode(&a).decode().unwrap();
        assert!(back.span().same(a.span()));
        let p = Preorder::from_pairs(3, &[(0, 1)]).unwrap();
        assert_eq!(PreorderDoc::encode(&p).decode().unwrap(), p);
        let b =
            BlockOrderedBasis::new((0..3).map(|i| Vector::<Q>::unit(3, i)).collect(), vec![2, 1]).unwrap();
        let bb: BlockOrderedBasis<Q> = from_json::<BasisDoc>(&to_json(&BasisDoc::encode(&b)))
            .unwrap()
            .decode()
            .unwrap();
        assert_eq!(bb.block_sizes(), b.block_sizes());
        let ch = validate_channel(vec![Mat::<Q>::identity(2)]).unwrap();
        let many = ChannelsDoc::Many(vec![ChannelDoc::encode(&ch), ChannelDoc::encode(&ch)]);
        let parsed: ChannelsDoc = from_json(&to_json(&many)).unwrap();
        assert_eq!(parsed.decode::<Q>().unwrap().len(), 2);
        let one: ChannelsDoc = from_json(&to_json(&ChannelDoc::encode(&ch))).unwrap();
        assert_eq!(one.decode::<Q>().unwrap().len(), 1);
    }
}
