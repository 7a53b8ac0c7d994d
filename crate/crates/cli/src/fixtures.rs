//! Bundled example documents.
//!
//! The JSON files under `fixtures/` are generated from the constructors
//! below; a test keeps the two in sync (`OPALG_REGEN_FIXTURES=1` rewrites
//! them).

use opalg::channels::random_block_channel;
use opalg::families::make_fullsubex_fixture;
use opalg::io::{to_json, AlgebraDoc, ChannelDoc, MatrixDoc};
use opalg::qposet::{example_unordered_gap, example_wide_antichain};
use opalg::{GaussRat, Mat, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = GaussRat;

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub bundled: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "full-subquotient",
        description: "Preorder algebra on a skewed basis of C^4 with a full 2-dimensional subobject",
        bundled: include_str!("../fixtures/full-subquotient.json"),
    },
    Fixture {
        name: "unordered-gap",
        description: "Nilpotent algebra in M_8 whose longest chain has length 4",
        bundled: include_str!("../fixtures/unordered-gap.json"),
    },
    Fixture {
        name: "wide-antichain",
        description: "span{E14, E24, E34} in M_4, width 3",
        bundled: include_str!("../fixtures/wide-antichain.json"),
    },
    Fixture {
        name: "jordan-block",
        description: "3x3 matrix with a 2x2 Jordan block for eigenvalue 2 and eigenvalue -1",
        bundled: include_str!("../fixtures/jordan-block.json"),
    },
    Fixture {
        name: "block-channel",
        description: "Channel on C^2 (+) C^1 that never mixes the summands",
        bundled: include_str!("../fixtures/block-channel.json"),
    },
];

pub fn find(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// Regenerates a fixture's JSON text from its constructor.
pub fn generate(name: &str) -> Result<Option<String>> {
    let text = match name {
        "full-subquotient" => {
            let (_, a) = make_fullsubex_fixture::<Q>(0, 1000)?;
            to_json(&AlgebraDoc::encode(&a))
        }
        "unordered-gap" => to_json(&AlgebraDoc::encode(&example_unordered_gap::<Q>())),
        "wide-antichain" => to_json(&AlgebraDoc::encode(&example_wide_antichain::<Q>())),
        "jordan-block" => {
            let m = Mat::<Q>::from_i64(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, -1]]);
            to_json(&MatrixDoc::encode(&m))
        }
        "block-channel" => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            to_json(&ChannelDoc::encode(&random_block_channel::<Q, _>(&mut rng, 2, 1)))
        }
        _ => return Ok(None),
    };
    Ok(Some(text + "\n"))
}
