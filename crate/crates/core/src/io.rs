//! Line-oriented text formats for tile sets, assemblies and assembly trees.
//!
//! All three formats are whitespace separated, ignore blank lines and treat
//! everything after `#` as a comment.
//!
//! ```text
//! temperature 2
//! seed A
//! tile A N=- E=g:1 S=- W=-
//! tile B N=- E=- S=- W=g:1
//! ```
//!
//! An assembly is one `x y NAME` line per tile. A tree is one node per line,
//! `L <id> <x> <y> <name>` or `J <id> <left> <right>`, children before
//! parents, root last, ids dense from 0.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::assembly::{Assembly, Position};
use crate::assembly_tree::{AssemblyTree, TreeNode};
use crate::error::{Error, Result};
use crate::tile::{Direction, NulledGlue, TileSet, TileSetBuilder, TileSystem};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number<T: std::str::FromStr>(line: usize, word: &str, what: &str) -> Result<T> {
    word.parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{word}`")))
}

/// A parsed tile system and the glues that normalization replaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTileSystem {
    pub system: TileSystem,
    pub nulled: Vec<NulledGlue>,
}

pub fn parse_tileset(text: &str) -> Result<ParsedTileSystem> {
    let mut temperature: Option<(u32, usize)> = None;
    let mut seed: Option<(String, usize)> = None;
    let mut builder = TileSetBuilder::new();
    let mut label_lines: HashMap<String, (u32, usize)> = HashMap::new();

    for (ln, words) in lines(text) {
        match words[0] {
            "temperature" => {
                if words.len() != 2 {
                    return Err(parse_err(ln, "expected `temperature K`"));
                }
                if temperature.is_some() {
                    return Err(parse_err(ln, "temperature given twice"));
                }
                let k: u32 = number(ln, words[1], "a temperature")?;
                if k == 0 {
                    return Err(parse_err(ln, "temperature must be positive"));
                }
                temperature = Some((k, ln));
            }
            "seed" => {
                if words.len() != 2 {
                    return Err(parse_err(ln, "expected `seed NAME`"));
                }
                if seed.is_some() {
                    return Err(parse_err(ln, "seed given twice"));
                }
                seed = Some((words[1].to_string(), ln));
            }
            "tile" => {
                if words.len() != 6 {
                    return Err(parse_err(ln, "expected `tile NAME N=.. E=.. S=.. W=..`"));
                }
                let name = words[1];
                if builder.has_tile(name) {
                    return Err(parse_err(ln, format!("duplicate tile name `{name}`")));
                }
                let mut sides: [Option<&str>; 4] = [None; 4];
                for w in &words[2..] {
                    let (key, spec) = w
                        .split_once('=')
                        .ok_or_else(|| parse_err(ln, format!("expected SIDE=GLUE, found `{w}`")))?;
                    let d = match key {
                        "N" => Direction::N,
                        "E" => Direction::E,
                        "S" => Direction::S,
                        "W" => Direction::W,
                        _ => return Err(parse_err(ln, format!("unknown side `{key}`"))),
                    };
                    if sides[d.index()].replace(spec).is_some() {
                        return Err(parse_err(ln, format!("side {key} given twice")));
                    }
                }
                let mut ids = [crate::tile::GlueId::NULL; 4];
                for (k, spec) in sides.iter().enumerate() {
                    let spec = spec.expect("four distinct sides among four words");
                    if spec != "-" {
                        let (label, strength) = spec
                            .rsplit_once(':')
                            .ok_or_else(|| parse_err(ln, format!("expected LABEL:STRENGTH, found `{spec}`")))?;
                        let strength: u32 = number(ln, strength, "a glue strength")?;
                        match label_lines.get(label) {
                            Some(&(s, first)) if s != strength => {
                                return Err(parse_err(
                                    ln,
                                    format!(
                                        "glue `{label}` has strength {strength} here but strength {s} on line {first}"
                                    ),
                                ));
                            }
                            Some(_) => {}
                            None => {
                                label_lines.insert(label.to_string(), (strength, ln));
                            }
                        }
                    }
                    ids[k] = builder.glue_spec(spec).map_err(|e| parse_err(ln, e.to_string()))?;
                }
                builder.tile(name, ids).map_err(|e| parse_err(ln, e.to_string()))?;
            }
            other => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
        }
    }

    let tileset = builder.build().map_err(|_| parse_err(0, "no tiles"))?;
    let (k, _) = temperature.ok_or_else(|| parse_err(0, "missing `temperature` line"))?;
    let seed = match seed {
        Some((name, ln)) => Some(
            tileset
                .tile_by_name(&name)
                .ok_or_else(|| parse_err(ln, format!("seed names unknown tile `{name}`")))?,
        ),
        None => None,
    };
    let (tileset, nulled) = tileset.normalized_with_report();
    Ok(ParsedTileSystem {
        system: TileSystem::new(tileset, k, seed)?,
        nulled,
    })
}

fn glue_text(ts: &TileSet, t: crate::tile::TileId, d: Direction) -> String {
    let g = ts.glue(t, d);
    if g.label.is_null() {
        "-".to_string()
    } else {
        format!("{}:{}", ts.label(g.label), g.strength)
    }
}

pub fn write_tileset(sys: &TileSystem) -> String {
    let ts = &sys.tileset;
    let mut out = format!("temperature {}\n", sys.temperature);
    if let Some(s) = sys.seed {
        let _ = writeln!(out, "seed {}", ts.name(s));
    }
    for t in ts.tile_ids() {
        let _ = write!(out, "tile {}", ts.name(t));
        for d in Direction::ALL {
            let _ = write!(out, " {}={}", d.letter(), glue_text(ts, t, d));
        }
        out.push('\n');
    }
    out
}

fn tile_named(ts: &TileSet, ln: usize, name: &str) -> Result<crate::tile::TileId> {
    ts.tile_by_name(name)
        .ok_or_else(|| parse_err(ln, format!("unknown tile `{name}`")))
}

pub fn parse_assembly(text: &str, ts: &TileSet) -> Result<Assembly> {
    let mut cells = Vec::new();
    for (ln, words) in lines(text) {
        if words.len() != 3 {
            return Err(parse_err(ln, "expected `x y NAME`"));
        }
        let x = number(ln, words[0], "an x coordinate")?;
        let y = number(ln, words[1], "a y coordinate")?;
        cells.push((Position::new(x, y), tile_named(ts, ln, words[2])?));
    }
    Assembly::new(cells)
}

pub fn write_assembly(a: &Assembly, ts: &TileSet) -> String {
    let mut out = String::new();
    for &(p, t) in a.cells() {
        let _ = writeln!(out, "{} {} {}", p.x, p.y, ts.name(t));
    }
    out
}

pub fn parse_tree(text: &str, ts: &TileSet) -> Result<AssemblyTree> {
    let mut nodes = Vec::new();
    for (ln, words) in lines(text) {
        let id: usize = match words.get(1) {
            Some(w) => number(ln, w, "a node id")?,
            None => return Err(parse_err(ln, "expected a node id")),
        };
        if id != nodes.len() {
            return Err(parse_err(ln, format!("expected node id {}, found {id}", nodes.len())));
        }
        let node = match (words[0], words.len()) {
            ("L", 5) => TreeNode::Leaf {
                position: Position::new(
                    number(ln, words[2], "an x coordinate")?,
                    number(ln, words[3], "a y coordinate")?,
                ),
                tile: tile_named(ts, ln, words[4])?,
            },
            ("J", 4) => TreeNode::Join {
                left: number(ln, words[2], "a node id")?,
                right: number(ln, words[3], "a node id")?,
            },
            _ => return Err(parse_err(ln, "expected `L id x y name` or `J id left right`")),
        };
        nodes.push(node);
    }
    AssemblyTree::from_nodes(nodes)
}

pub fn write_tree(tree: &AssemblyTree, ts: &TileSet) -> String {
    let mut out = String::new();
    for (id, n) in tree.nodes().iter().enumerate() {
        let _ = match *n {
            TreeNode::Leaf { position, tile } => {
                writeln!(out, "L {id} {} {} {}", position.x, position.y, ts.name(tile))
            }
            TreeNode::Join { left, right } => writeln!(out, "J {id} {left} {right}"),
        };
    }
    out
}
