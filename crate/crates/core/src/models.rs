//! Random graph generators: lattice grids and pipelines that connect a
//! uniform point cloud and then perturb the edge set.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{delaunay_points, random_point_cloud, Point};
use crate::graph::{largest_component, Graph};
use crate::spanning::trial_rng;

/// Upper end of the search interval for the distance-probability base.
pub const MAX_BASE: f64 = 1e6;
const RESAMPLE_ATTEMPTS: usize = 100;

fn lattice_coords(rows: usize, cols: usize) -> Vec<Point> {
    let scale = 1.0 / (rows.max(cols).saturating_sub(1).max(1)) as f64;
    (0..rows)
        .flat_map(|r| (0..cols).map(move |c| Point::new(c as f64 * scale, r as f64 * scale)))
        .collect()
}

fn lattice_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    edges
}

/// `rows × cols` square lattice with unit-spaced coordinates scaled into the
/// unit square. Vertex `r * cols + c` sits at column `c`, row `r`.
pub fn square_grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least one row and column, got {rows}x{cols}"
        )));
    }
    Graph::from_edges_with_coords(lattice_coords(rows, cols), lattice_edges(rows, cols))
}

/// Square lattice plus every `(x, y)–(x+1, y+1)` diagonal.
pub fn triangular_grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidArgument(format!(
            "triangular grid needs at least 2x2, got {rows}x{cols}"
        )));
    }
    let mut edges = lattice_edges(rows, cols);
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            edges.push((r * cols + c, (r + 1) * cols + c + 1));
        }
    }
    Graph::from_edges_with_coords(lattice_coords(rows, cols), edges)
}

/// Square lattice where each unit cell gets a diagonal with probability `p`,
/// in either direction with equal chance.
pub fn perturbed_grid(rows: usize, cols: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "diagonal probability must lie in [0, 1], got {p}"
        )));
    }
    if rows == 0 || cols == 0 {
        return square_grid(rows, cols);
    }
    let mut rng = trial_rng(seed, 0);
    let mut edges = lattice_edges(rows, cols);
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            if rng.random_bool(p) {
                let (a, b, d, e) = (r * cols + c, r * cols + c + 1, (r + 1) * cols + c, (r + 1) * cols + c + 1);
                if rng.random_bool(0.5) {
                    edges.push((a, e));
                } else {
                    edges.push((b, d));
                }
            }
        }
    }
    Graph::from_edges_with_coords(lattice_coords(rows, cols), edges)
}

/// Side length used by grid sources without explicit dimensions.
fn side_for(n: usize) -> usize {
    ((n as f64).sqrt().round() as usize).max(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    PointCloud,
    /// Dimensions `(rows, cols)`, or a square of about `n` vertices.
    Grid(Option<(usize, usize)>),
    TriangularGrid(Option<(usize, usize)>),
    PerturbedGrid(Option<(usize, usize)>, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceBase {
    Fixed(f64),
    /// Chosen per instance so the expected average degree hits the target.
    Tuned(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stage {
    Delaunay,
    /// Adds the `⌊c·n⌋` shortest absent pairs.
    AddShortest(f64),
    /// Removes the `⌊c·n⌋` longest edges.
    RemoveLongest(f64),
    RemoveRandom(f64),
    AddRandom(f64),
    AddDistanceProb(DistanceBase),
    /// Adds `⌊s·n⌋` edges with degree-proportional endpoints.
    AddPreferential(f64),
}

impl Stage {
    fn name(&self) -> &'static str {
        match self {
            Stage::Delaunay => "delaunay",
            Stage::AddShortest(_) => "add_shortest",
            Stage::RemoveLongest(_) => "remove_longest",
            Stage::RemoveRandom(_) => "remove_random",
            Stage::AddRandom(_) => "add_random",
            Stage::AddDistanceProb(_) => "add_distance_prob",
            Stage::AddPreferential(_) => "add_preferential",
        }
    }

    fn needs_coords(&self) -> bool {
        matches!(
            self,
            Stage::Delaunay | Stage::AddShortest(_) | Stage::RemoveLongest(_) | Stage::AddDistanceProb(_)
        )
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match *self {
            Stage::RemoveRandom(q) | Stage::AddRandom(q) if !(0.0..=1.0).contains(&q) => {
                bad(format!("{} probability {q} is outside [0, 1]", self.name()))
            }
            Stage::AddShortest(c) | Stage::RemoveLongest(c) | Stage::AddPreferential(c)
                if !(c >= 0.0 && c.is_finite()) =>
            {
                bad(format!("{} count factor {c} must be nonnegative", self.name()))
            }
            Stage::AddDistanceProb(DistanceBase::Fixed(b)) if !(b > 1.0 && b.is_finite()) => {
                bad(format!("distance base {b} must exceed 1"))
            }
            Stage::AddDistanceProb(DistanceBase::Tuned(t)) if !(t > 0.0 && t.is_finite()) => {
                bad(format!("target degree {t} must be positive"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Postprocess {
    None,
    LargestComponent,
}

/// A named generator: a vertex source, edge stages in order, and an
/// optional restriction to the largest component.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub source: Source,
    pub stages: Vec<Stage>,
    pub postprocess: Postprocess,
}

impl ModelSpec {
    pub fn new(name: &str, source: Source, stages: Vec<Stage>, postprocess: Postprocess) -> Result<Self> {
        let spec = ModelSpec {
            name: name.to_string(),
            source,
            stages,
            postprocess,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let Source::PerturbedGrid(_, p) = self.source {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidSpec(format!("diagonal probability {p} is outside [0, 1]")));
            }
        }
        let dims = match self.source {
            Source::Grid(d) | Source::TriangularGrid(d) | Source::PerturbedGrid(d, _) => d,
            Source::PointCloud => None,
        };
        if matches!(dims, Some((0, _)) | Some((_, 0))) {
            return Err(Error::InvalidSpec("grid dimensions must be positive".into()));
        }
        self.stages.iter().try_for_each(Stage::validate)
    }

    /// Looks up a catalog preset by name, or parses the textual form.
    pub fn resolve(text: &str) -> Result<Self> {
        let key = text.trim();
        let key = key.strip_prefix("model").unwrap_or(key);
        if let Some(spec) = model_catalog().into_iter().find(|s| s.name == key) {
            return Ok(spec);
        }
        text.parse()
    }
}

fn fmt_dims(f: &mut fmt::Formatter<'_>, name: &str, dims: Option<(usize, usize)>, extra: Option<f64>) -> fmt::Result {
    let mut args: Vec<String> = Vec::new();
    if let Some((r, c)) = dims {
        args.push(r.to_string());
        args.push(c.to_string());
    }
    if let Some(p) = extra {
        args.push(p.to_string());
    }
    if args.is_empty() {
        f.write_str(name)
    } else {
        write!(f, "{name}({})", args.join(","))
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Source::PointCloud => f.write_str("cloud"),
            Source::Grid(d) => fmt_dims(f, "grid", d, None),
            Source::TriangularGrid(d) => fmt_dims(f, "tri_grid", d, None),
            Source::PerturbedGrid(d, p) => fmt_dims(f, "perturbed_grid", d, Some(p)),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Stage::Delaunay => f.write_str("delaunay"),
            Stage::AddShortest(x)
            | Stage::RemoveLongest(x)
            | Stage::RemoveRandom(x)
            | Stage::AddRandom(x)
            | Stage::AddPreferential(x)
            | Stage::AddDistanceProb(DistanceBase::Fixed(x)) => write!(f, "{}({x})", self.name()),
            Stage::AddDistanceProb(DistanceBase::Tuned(t)) => write!(f, "{}(target={t})", self.name()),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.source)?;
        for s in &self.stages {
            write!(f, "|{s}")?;
        }
        match self.postprocess {
            Postprocess::None => f.write_str("|none"),
            Postprocess::LargestComponent => f.write_str("|lcc"),
        }
    }
}

/// Splits `head(a,b)` into `("head", ["a", "b"])`.
fn call(token: &str) -> Result<(&str, Vec<&str>)> {
    let token = token.trim();
    match token.find('(') {
        None => Ok((token, Vec::new())),
        Some(i) => {
            let inner = token[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::InvalidSpec(format!("missing `)` in {token:?}")))?;
            let args = inner.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
            Ok((token[..i].trim(), args))
        }
    }
}

fn num<T: FromStr>(arg: &str, what: &str) -> Result<T> {
    arg.parse()
        .map_err(|_| Error::InvalidSpec(format!("bad {what} {arg:?}")))
}

fn parse_dims(args: &[&str]) -> Result<Option<(usize, usize)>> {
    match args {
        [] => Ok(None),
        [r, c] => Ok(Some((num(r, "row count")?, num(c, "column count")?))),
        _ => Err(Error::InvalidSpec(format!("expected (rows, cols), got {args:?}"))),
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, args) = call(s)?;
        match head {
            "cloud" | "point_cloud" if args.is_empty() => Ok(Source::PointCloud),
            "grid" => Ok(Source::Grid(parse_dims(&args)?)),
            "tri_grid" | "triangular_grid" => Ok(Source::TriangularGrid(parse_dims(&args)?)),
            "perturbed_grid" => match args.split_last() {
                Some((p, dims)) => Ok(Source::PerturbedGrid(parse_dims(dims)?, num(p, "probability")?)),
                None => Err(Error::InvalidSpec("perturbed_grid needs a diagonal probability".into())),
            },
            _ => Err(Error::InvalidSpec(format!("unknown source {s:?}"))),
        }
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, args) = call(s)?;
        let one = || -> Result<f64> {
            match args.as_slice() {
                [x] => num(x, "parameter"),
                _ => Err(Error::InvalidSpec(format!("{head} takes one argument"))),
            }
        };
        let stage = match head {
            "delaunay" if args.is_empty() => Stage::Delaunay,
            "add_shortest" => Stage::AddShortest(one()?),
            "remove_longest" => Stage::RemoveLongest(one()?),
            "remove_random" => Stage::RemoveRandom(one()?),
            "add_random" => Stage::AddRandom(one()?),
            "add_preferential" => Stage::AddPreferential(one()?),
            "add_distance_prob" => match args.as_slice() {
                [x] => match x.strip_prefix("target=") {
                    Some(t) => Stage::AddDistanceProb(DistanceBase::Tuned(num(t.trim(), "target")?)),
                    None => Stage::AddDistanceProb(DistanceBase::Fixed(num(x, "base")?)),
                },
                _ => return Err(Error::InvalidSpec("add_distance_prob takes one argument".into())),
            },
            _ => return Err(Error::InvalidSpec(format!("unknown stage {s:?}"))),
        };
        stage.validate()?;
        Ok(stage)
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    /// `name:source(args)|stage(args)|...|post`, where the name and the
    /// trailing `lcc`/`none` are optional.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, body) = match text.split_once(':') {
            Some((n, b)) => (n.trim(), b),
            None => (text, text),
        };
        let mut parts: Vec<&str> = body.split('|').map(str::trim).collect();
        let postprocess = match parts.last() {
            Some(&"lcc") => Postprocess::LargestComponent,
            Some(&"none") => Postprocess::None,
            _ => {
                parts.push("none");
                Postprocess::None
            }
        };
        parts.pop();
        let (src, stages) = parts
            .split_first()
            .ok_or_else(|| Error::InvalidSpec("missing source".into()))?;
        let spec = ModelSpec {
            name: name.to_string(),
            source: src.parse()?,
            stages: stages.iter().map(|s| s.parse()).collect::<Result<_>>()?,
            postprocess,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// The presets, in table order.
pub fn model_catalog() -> Vec<ModelSpec> {
    use Postprocess::*;
    use Stage::*;
    let d = Source::PointCloud;
    let rows: Vec<(&str, Vec<Stage>, Postprocess)> = vec![
        ("1", vec![AddDistanceProb(DistanceBase::Tuned(5.4))], None),
        ("2", vec![AddShortest(2.7)], LargestComponent),
        ("3", vec![Delaunay], None),
        ("4", vec![Delaunay, RemoveRandom(0.2)], LargestComponent),
        ("4b", vec![Delaunay, RemoveRandom(0.4)], LargestComponent),
        ("5", vec![Delaunay, RemoveRandom(0.2), AddRandom(0.05)], LargestComponent),
        ("5b", vec![Delaunay, RemoveRandom(0.4), AddRandom(0.05)], LargestComponent),
        ("6", vec![Delaunay, AddShortest(1.0)], LargestComponent),
        ("7", vec![Delaunay, AddShortest(1.0), RemoveLongest(1.0)], LargestComponent),
        ("8", vec![Delaunay, RemoveRandom(0.05), AddPreferential(0.3)], LargestComponent),
        ("9", vec![Delaunay, RemoveRandom(0.2), AddShortest(1.0)], LargestComponent),
        ("9b", vec![Delaunay, RemoveRandom(0.4), AddShortest(1.0)], LargestComponent),
        ("10", vec![Delaunay, AddShortest(1.0), RemoveRandom(0.2)], LargestComponent),
        ("10b", vec![Delaunay, AddShortest(1.0), RemoveRandom(0.4)], LargestComponent),
        ("11", vec![AddShortest(3.4), RemoveRandom(0.2)], LargestComponent),
        ("11b", vec![AddShortest(4.5), RemoveRandom(0.4)], LargestComponent),
        ("11c", vec![AddShortest(7.0), RemoveRandom(0.6)], LargestComponent),
        ("12", vec![Delaunay, AddPreferential(0.5), RemoveRandom(0.14)], LargestComponent),
    ];
    rows.into_iter()
        .map(|(name, stages, post)| ModelSpec {
            name: name.to_string(),
            source: d,
            stages,
            postprocess: post,
        })
        .collect()
}

/// Mutable edge set over a fixed vertex set during generation.
struct Pipeline {
    n: usize,
    coords: Option<Vec<Point>>,
    edges: BTreeSet<(u32, u32)>,
}

impl Pipeline {
    fn coords(&self, stage: &Stage) -> Result<&[Point]> {
        self.coords
            .as_deref()
            .ok_or_else(|| Error::MissingCoordinates(stage.name().to_string()))
    }

    fn complete(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    fn count(&self, factor: f64) -> usize {
        (factor * self.n as f64).floor() as usize
    }

    fn apply(&mut self, stage: &Stage, rng: &mut ChaCha8Rng) -> Result<()> {
        if stage.needs_coords() {
            self.coords(stage)?;
        }
        match *stage {
            Stage::Delaunay => {
                let t = delaunay_points(self.coords(stage)?)?;
                self.edges.extend(t.graph.edges().iter().copied());
            }
            Stage::AddShortest(c) => {
                let need = self.count(c).min(self.complete() - self.edges.len());
                let pairs = shortest_absent_pairs(self.coords(stage)?, &self.edges, need);
                self.edges.extend(pairs);
            }
            Stage::RemoveLongest(c) => {
                let pts = self.coords(stage)?;
                let mut by_len: Vec<(f64, (u32, u32))> = self
                    .edges
                    .iter()
                    .map(|&(u, v)| (pts[u as usize].dist2(pts[v as usize]), (u, v)))
                    .collect();
                by_len.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                let k = self.count(c).min(by_len.len());
                for (_, e) in &by_len[..k] {
                    self.edges.remove(e);
                }
            }
            Stage::RemoveRandom(q) => {
                self.edges.retain(|_| !rng.random_bool(q));
            }
            Stage::AddRandom(q) => self.add_random(q, rng),
            Stage::AddDistanceProb(base) => {
                let b = match base {
                    DistanceBase::Fixed(b) => b,
                    DistanceBase::Tuned(target) => {
                        tune_base(self.coords(stage)?, &self.edges, target)?
                    }
                };
                let pts = self.coords(stage)?;
                let ln_b = b.ln();
                let mut added = Vec::new();
                for u in 0..self.n {
                    for v in u + 1..self.n {
                        let e = (u as u32, v as u32);
                        if self.edges.contains(&e) {
                            continue;
                        }
                        let p = (-pts[u].dist(pts[v]) * ln_b).exp();
                        if rng.random::<f64>() < p {
                            added.push(e);
                        }
                    }
                }
                self.edges.extend(added);
            }
            Stage::AddPreferential(s) => self.add_preferential(s, rng)?,
        }
        Ok(())
    }

    /// Every absent pair independently with probability `q`, skipping
    /// geometrically through the pair index space.
    fn add_random(&mut self, q: f64, rng: &mut ChaCha8Rng) {
        let total = self.complete() as u64;
        if q <= 0.0 || total == 0 {
            return;
        }
        let ln_miss = (1.0 - q).ln();
        let skip = |rng: &mut ChaCha8Rng| -> u64 {
            if q >= 1.0 {
                return 0;
            }
            let u: f64 = rng.random();
            ((1.0 - u).ln() / ln_miss).floor() as u64
        };
        let n = self.n as u64;
        let (mut row, mut row_start) = (0u64, 0u64);
        let mut idx = skip(rng);
        let mut added = Vec::new();
        while idx < total {
            // row u holds pairs (u, u+1..n)
            while idx >= row_start + (n - 1 - row) {
                row_start += n - 1 - row;
                row += 1;
            }
            let v = row + 1 + (idx - row_start);
            let e = (row as u32, v as u32);
            if !self.edges.contains(&e) {
                added.push(e);
            }
            idx = idx.saturating_add(1).saturating_add(skip(rng));
        }
        self.edges.extend(added);
    }

    fn add_preferential(&mut self, s: f64, rng: &mut ChaCha8Rng) -> Result<()> {
        let count = self.count(s);
        if count == 0 {
            return Ok(());
        }
        let mut ends: Vec<u32> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        if ends.is_empty() {
            return Err(Error::InvalidSpec(
                "add_preferential needs at least one existing edge".into(),
            ));
        }
        for _ in 0..count {
            for _ in 0..RESAMPLE_ATTEMPTS {
                let u = ends[rng.random_range(0..ends.len())];
                let v = ends[rng.random_range(0..ends.len())];
                if u != v && self.edges.insert((u.min(v), u.max(v))) {
                    ends.push(u);
                    ends.push(v);
                    break;
                }
            }
        }
        Ok(())
    }

    fn into_graph(self) -> Result<Graph> {
        let edges = self.edges.into_iter().map(|(u, v)| (u as usize, v as usize));
        let g = Graph::from_edges(self.n, edges)?;
        Ok(match self.coords {
            Some(c) => g.with_coords(c),
            None => g,
        })
    }
}

/// The `need` shortest vertex pairs not in `edges`, ordered by length then
/// by id pair.
fn shortest_absent_pairs(pts: &[Point], edges: &BTreeSet<(u32, u32)>, need: usize) -> Vec<(u32, u32)> {
    let n = pts.len();
    if need == 0 || n < 2 {
        return Vec::new();
    }
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let diameter = lo.dist(hi);
    // radius expected to enclose enough pairs for a uniform cloud
    let wanted = (need + edges.len()) as f64 * 1.5;
    let mut r = span * (2.0 * wanted / (std::f64::consts::PI * (n * n) as f64)).sqrt();
    loop {
        let everything = r >= diameter;
        let mut found = pairs_within(pts, lo, span, r, everything);
        found.retain(|&(_, u, v)| !edges.contains(&(u, v)));
        if found.len() >= need || everything {
            let cmp = |a: &(f64, u32, u32), b: &(f64, u32, u32)| {
                a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2)))
            };
            let take = need.min(found.len());
            if take < found.len() {
                found.select_nth_unstable_by(take, cmp);
                found.truncate(take);
            }
            found.sort_by(cmp);
            return found.into_iter().map(|(_, u, v)| (u, v)).collect();
        }
        r *= 1.6;
    }
}

/// All pairs `(d², u, v)` with `u < v` at distance at most `r`.
fn pairs_within(pts: &[Point], lo: Point, span: f64, r: f64, everything: bool) -> Vec<(f64, u32, u32)> {
    let n = pts.len();
    if everything {
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                out.push((pts[u].dist2(pts[v]), u as u32, v as u32));
            }
        }
        return out;
    }
    let cells = ((span / r).floor() as usize).clamp(1, 4096);
    let cell = |p: Point| {
        let cx = (((p.x - lo.x) / span * cells as f64) as usize).min(cells - 1);
        let cy = (((p.y - lo.y) / span * cells as f64) as usize).min(cells - 1);
        (cx, cy)
    };
    let mut heads = vec![Vec::new(); cells * cells];
    for (i, &p) in pts.iter().enumerate() {
        let (cx, cy) = cell(p);
        heads[cy * cells + cx].push(i as u32);
    }
    let r2 = r * r;
    let mut out = Vec::new();
    for (u, &p) in pts.iter().enumerate() {
        let (cx, cy) = cell(p);
        for y in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
            for x in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                for &v in &heads[y * cells + x] {
                    if (v as usize) > u {
                        let d2 = p.dist2(pts[v as usize]);
                        if d2 <= r2 {
                            out.push((d2, u as u32, v));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Expected average degree when every absent pair joins with probability
/// `exp(-d · ln_b)`.
fn expected_degree(dists: &[f64], existing: usize, n: usize, ln_b: f64) -> f64 {
    let s: f64 = dists.iter().map(|d| (-d * ln_b).exp()).sum();
    2.0 * (existing as f64 + s) / n as f64
}

fn tune_base(pts: &[Point], edges: &BTreeSet<(u32, u32)>, target: f64) -> Result<f64> {
    let n = pts.len();
    let unreachable = || Error::BracketNotFound { n, target };
    if n < 2 || target >= (n - 1) as f64 {
        return Err(unreachable());
    }
    let mut dists = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u as u32, v as u32)) {
                dists.push(pts[u].dist(pts[v]));
            }
        }
    }
    let f = |ln_b: f64| expected_degree(&dists, edges.len(), n, ln_b);
    // the expected degree falls as b grows
    let (mut lo, mut hi) = (0.0, MAX_BASE.ln());
    if f(hi) > target {
        return Err(unreachable());
    }
    let mut mid = hi;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let val = f(mid);
        if (val - target).abs() <= 1e-3 {
            break;
        }
        if val > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid.exp())
}

/// Base `b` for which the point cloud of `(n, seed)` has expected average
/// degree `target` under the `b^(-d)` rule.
pub fn tune_model1_base(n: usize, target: f64, seed: u64) -> Result<f64> {
    if target.is_nan() || target <= 0.0 {
        return Err(Error::InvalidArgument(format!("target degree {target} must be positive")));
    }
    let cloud = random_point_cloud(n, seed)?;
    tune_base(&cloud.points, &BTreeSet::new(), target)
}

/// Expected average degree of the `(n, seed)` point cloud at base `b`.
pub fn model1_expected_degree(n: usize, b: f64, seed: u64) -> Result<f64> {
    let cloud = random_point_cloud(n, seed)?;
    let pts = &cloud.points;
    let mut dists = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            dists.push(pts[u].dist(pts[v]));
        }
    }
    Ok(expected_degree(&dists, 0, n, b.ln()))
}

/// Runs `stages` on a copy of `g`. Stage `i` draws from its own stream of
/// `seed`.
pub fn apply_stages(g: &Graph, stages: &[Stage], seed: u64) -> Result<Graph> {
    let mut p = Pipeline {
        n: g.n(),
        coords: g.coords().map(<[Point]>::to_vec),
        edges: g.edges().iter().copied().collect(),
    };
    for (i, stage) in stages.iter().enumerate() {
        stage.validate()?;
        let mut rng = trial_rng(seed, 1 + i as u64);
        p.apply(stage, &mut rng)?;
    }
    let out = p.into_graph()?;
    // keep the original ids
    Ok(g.with_edges(out.edges().to_vec()))
}

/// Generates one instance. Point-cloud sources use `n` points; grid sources
/// use their own dimensions, or a square of about `n` vertices.
pub fn build_model(spec: &ModelSpec, n: usize, seed: u64) -> Result<Graph> {
    spec.validate()?;
    let base = match spec.source {
        Source::PointCloud => {
            let cloud = random_point_cloud(n, seed)?;
            Graph::from_edges_with_coords(cloud.points, std::iter::empty())?
        }
        Source::Grid(d) => {
            let (r, c) = d.unwrap_or((side_for(n), side_for(n)));
            square_grid(r, c)?
        }
        Source::TriangularGrid(d) => {
            let (r, c) = d.unwrap_or((side_for(n), side_for(n)));
            triangular_grid(r, c)?
        }
        Source::PerturbedGrid(d, p) => {
            let (r, c) = d.unwrap_or((side_for(n), side_for(n)));
            perturbed_grid(r, c, p, seed)?
        }
    };
    let g = apply_stages(&base, &spec.stages, seed)?;
    match spec.postprocess {
        Postprocess::None => Ok(g),
        Postprocess::LargestComponent => largest_component(&g),
    }
}
