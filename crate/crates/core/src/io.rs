//! Stable JSON formats: patches, atlases, substitution graphs, region
//! dumps and verification verdicts.
//!
//! Patch format: `{"tiles": [{"shape": "fat"|"thin", "anchor": [5 ints],
//! "orientation": 0..9, "labels": {"marked": bool}?}, …]}` — anchors are
//! canonical 5-tuples (minimum coordinate 0), golden numbers print as
//! "a+b*phi".

use serde::{Deserialize, Serialize};

use crate::cutproject::{RegionAtlas, SectionAtlas};
use crate::localrules::{FailureSite, VerificationReport};
use crate::patch::{Atlas, EquivMode, KMap, Patch};
use crate::substitution::AtlasGraph;
use crate::tile::{RhombusTile, Shape};
use crate::lattice::PlanarPoint;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
pub struct TileJson {
    pub shape: String,
    pub anchor: [i64; 5],
    pub orientation: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<LabelJson>,
}

#[derive(Serialize, Deserialize)]
pub struct LabelJson {
    pub marked: bool,
}

#[derive(Serialize, Deserialize)]
pub struct PatchJson {
    pub tiles: Vec<TileJson>,
}

pub fn tile_to_json(t: &RhombusTile) -> TileJson {
    TileJson {
        shape: match t.shape {
            Shape::Fat => "fat".into(),
            Shape::Thin => "thin".into(),
        },
        anchor: t.anchor.0,
        orientation: t.orient,
        labels: t.mark.map(|m| LabelJson { marked: m }),
    }
}

pub fn tile_from_json(t: &TileJson) -> Result<RhombusTile> {
    let shape = match t.shape.as_str() {
        "fat" => Shape::Fat,
        "thin" => Shape::Thin,
        other => return Err(Error::Parse(format!("unknown shape {other:?}"))),
    };
    if t.orientation > 9 {
        return Err(Error::Parse(format!(
            "orientation {} out of range",
            t.orientation
        )));
    }
    Ok(RhombusTile::new(
        shape,
        PlanarPoint::new(t.anchor),
        t.orientation,
        t.labels.as_ref().map(|l| l.marked),
    ))
}

pub fn patch_to_json(patch: &Patch) -> PatchJson {
    PatchJson {
        tiles: patch.tiles().iter().map(tile_to_json).collect(),
    }
}

pub fn patch_to_string(patch: &Patch) -> String {
    serde_json::to_string_pretty(&patch_to_json(patch)).expect("serializable")
}

/// Parses and geometrically validates a patch.
pub fn patch_from_str(s: &str) -> Result<Patch> {
    let pj: PatchJson =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad patch JSON: {e}")))?;
    let tiles: Vec<RhombusTile> = pj
        .tiles
        .iter()
        .map(tile_from_json)
        .collect::<Result<_>>()?;
    Patch::new(tiles)
}

#[derive(Serialize)]
pub struct AtlasJson {
    pub k: u32,
    pub mode: String,
    pub entries: Vec<PatchJson>,
}

pub fn atlas_to_json(atlas: &Atlas) -> AtlasJson {
    AtlasJson {
        k: atlas.k,
        mode: match atlas.mode {
            EquivMode::Translation => "translation".into(),
            EquivMode::Isometry => "isometry".into(),
        },
        entries: atlas
            .entries
            .iter()
            .map(|e| PatchJson {
                tiles: e.tiles.iter().map(tile_to_json).collect(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct AtlasGraphJson {
    pub classes: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn graph_to_json(g: &AtlasGraph) -> AtlasGraphJson {
    AtlasGraphJson {
        classes: g.n,
        edges: g.edges.clone(),
    }
}

/// Adjacency-matrix CSV: one row per class, entry 1 when σ(row) contains
/// the column class.
pub fn graph_to_csv(g: &AtlasGraph) -> String {
    let mut out = String::new();
    out.push_str("class");
    for j in 0..g.n {
        out.push_str(&format!(",{j}"));
    }
    out.push('\n');
    for i in 0..g.n {
        out.push_str(&format!("{i}"));
        let row = g.out_neighbors(i);
        for j in 0..g.n {
            out.push_str(if row.contains(&j) { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

/// Region dump entry: golden coordinates as canonical strings.
#[derive(Serialize)]
pub struct RegionJson {
    pub kmap: PatchJson,
    pub vertices: Vec<[String; 3]>,
    pub volume: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency: Option<String>,
}

pub fn regions_to_json(ra: &RegionAtlas) -> Vec<RegionJson> {
    ra.classes
        .iter()
        .map(|c| RegionJson {
            kmap: PatchJson {
                tiles: c.kmap.tiles.iter().map(tile_to_json).collect(),
            },
            vertices: c
                .region
                .verts
                .iter()
                .map(|v| {
                    [
                        v.x.to_string(),
                        v.y.to_string(),
                        v.z.to_string(),
                    ]
                })
                .collect(),
            volume: c.volume.to_string(),
            frequency: None,
        })
        .collect()
}

#[derive(Serialize)]
pub struct FrequencyRowJson {
    pub kmap: PatchJson,
    pub frequency: String,
    pub frequency_float: f64,
}

pub fn frequencies_to_json(sa: &SectionAtlas) -> Vec<FrequencyRowJson> {
    sa.frequencies()
        .iter()
        .map(|(km, f)| FrequencyRowJson {
            kmap: PatchJson {
                tiles: km.tiles.iter().map(tile_to_json).collect(),
            },
            frequency: f.to_string(),
            frequency_float: f.to_f64(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub verdict: String,
    pub checked_vertices: usize,
    pub skipped_boundary_vertices: Vec<[i64; 5]>,
    pub failures: Vec<FailureJson>,
}

#[derive(Serialize)]
pub struct FailureJson {
    pub site: String,
    pub reason: String,
}

pub fn report_to_json(r: &VerificationReport) -> VerdictJson {
    VerdictJson {
        verdict: if r.pass { "pass".into() } else { "fail".into() },
        checked_vertices: r.checked_vertices,
        skipped_boundary_vertices: r.skipped_boundary_vertices.iter().map(|v| v.0).collect(),
        failures: r
            .failures
            .iter()
            .map(|f| FailureJson {
                site: match &f.site {
                    FailureSite::Vertex(v) => format!("vertex {:?}", v),
                    FailureSite::Edge(a, b) => format!("edge {:?}-{:?}", a, b),
                },
                reason: f.reason.clone(),
            })
            .collect(),
    }
}

pub fn kmap_to_json(km: &KMap) -> PatchJson {
    PatchJson {
        tiles: km.tiles.iter().map(tile_to_json).collect(),
    }
}
