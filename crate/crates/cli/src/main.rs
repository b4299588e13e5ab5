use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spacesweep::axenum::{enumerate_axis, AxisCrossing};
use spacesweep::budget::lg;
use spacesweep::closest::{closest_pair, PairResult};
use spacesweep::gen::{self, GenConfig};
use spacesweep::geom::{Point, Rect, Segment};
use spacesweep::klee::{corner_tape, measure_sorted, measure_unsorted};
use spacesweep::oracle::{bf_closest, bf_intersections, bf_measure, Policy};
use spacesweep::segx::{self, Crossing};
use spacesweep::tape::parse_records;
use spacesweep::{axcount, par, Error, Outcome, Tape};

#[derive(Parser)]
#[command(name = "spacesweep", version, about = "Plane-sweep geometry over read-only input under a workspace bit budget")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Input file; standard input when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Workspace parameter s in bits; defaults to n * lg n.
    #[arg(long = "space-bits", global = true)]
    space_bits: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Algo {
    /// Closest pair of points: "i j dist2".
    Closest,
    /// Intersections among general segments.
    Segx {
        #[arg(value_enum)]
        mode: Mode,
    },
    /// Horizontal-vertical crossings among axis-parallel segments.
    Axis {
        #[arg(value_enum)]
        mode: Mode,
    },
    /// Area of the union of rectangles.
    Klee {
        /// Run the sorted-corner strip method.
        #[arg(long)]
        sorted: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Enum,
    Count,
}

#[derive(ValueEnum, Clone, Copy)]
enum GenKind {
    Points,
    Segments,
    Axis,
    Rects,
}

#[derive(Subcommand)]
enum Cmd {
    #[command(flatten)]
    Run(Algo),
    /// Write a seeded random instance.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long = "dup-rate", default_value_t = 0.0)]
        dup_rate: f64,
        #[arg(long)]
        degenerate: bool,
    },
    /// Run an algorithm and compare with the brute-force oracle.
    Verify {
        #[command(subcommand)]
        algo: Algo,
    },
    /// CSV of time and space measurements over a grid of space parameters.
    Bench {
        #[command(subcommand)]
        algo: Algo,
        /// Instance size when no input is given.
        #[arg(long, global = true, default_value_t = 1024)]
        n: usize,
        /// Number of grid points.
        #[arg(long, global = true, default_value_t = 6)]
        points: usize,
        /// Repetitions per grid point; the fastest is reported.
        #[arg(long, global = true, default_value_t = 1)]
        reps: usize,
    },
}

enum Fail {
    Usage(String),
    Mismatch(String),
    Budget(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Fail::Budget(e.to_string()),
            _ => Fail::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Usage(e.to_string())
    }
}

/// A loaded instance of one algorithm's input type.
enum Input {
    Points(Tape<Point>),
    Segments(Tape<Segment>),
    Rects(Tape<Rect>),
}

impl Input {
    fn len(&self) -> usize {
        match self {
            Input::Points(t) => t.len(),
            Input::Segments(t) => t.len(),
            Input::Rects(t) => t.len(),
        }
    }
}

enum Answer {
    Pair(PairResult),
    Crossings(Vec<Crossing>),
    Axis(Vec<AxisCrossing>),
    Number(u64),
}

impl Answer {
    /// The CSV `k` column: pair distance, crossing count or area.
    fn k(&self) -> u64 {
        match self {
            Answer::Pair(p) => p.dist2,
            Answer::Crossings(v) => v.len() as u64,
            Answer::Axis(v) => v.len() as u64,
            Answer::Number(k) => *k,
        }
    }

    fn render(&self) -> String {
        let mut out = String::new();
        match self {
            Answer::Pair(p) => writeln!(out, "{} {} {}", p.i, p.j, p.dist2).unwrap(),
            Answer::Crossings(v) => v.iter().for_each(|c| writeln!(out, "{} {} {}", c.i, c.j, c.kind.as_str()).unwrap()),
            Answer::Axis(v) => v.iter().for_each(|c| writeln!(out, "{} {} {} {}", c.i, c.j, c.x, c.y).unwrap()),
            Answer::Number(k) => writeln!(out, "{k}").unwrap(),
        }
        out
    }
}

fn read_text(path: &Option<PathBuf>) -> Result<String, Fail> {
    let mut text = String::new();
    match path {
        Some(p) => text = std::fs::read_to_string(p).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?,
        None => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn load(algo: Algo, text: &str) -> Result<Input, Fail> {
    Ok(match algo {
        Algo::Closest => Input::Points(Tape::points(parse_records(text)?)?),
        Algo::Segx { .. } => Input::Segments(Tape::segments(parse_records(text)?)?),
        Algo::Axis { .. } => Input::Segments(Tape::axis_segments(parse_records(text)?)?),
        Algo::Klee { .. } => Input::Rects(Tape::rects(parse_records(text)?)?),
    })
}

fn generate(algo: Algo, n: usize, seed: u64) -> Result<Input, Fail> {
    let cfg = GenConfig::new(n, seed);
    Ok(match algo {
        Algo::Closest => Input::Points(Tape::points(gen::points(&cfg)?)?),
        Algo::Segx { .. } => Input::Segments(Tape::segments(gen::segments(&cfg.max_len(1 << 14))?)?),
        Algo::Axis { .. } => Input::Segments(Tape::axis_segments(gen::axis(&cfg.max_len(1 << 18))?)?),
        Algo::Klee { .. } => Input::Rects(Tape::rects(gen::rects(&cfg.max_len(1 << 17))?)?),
    })
}

fn run(algo: Algo, input: &Input, s: u64) -> Result<Outcome<Answer>, Fail> {
    Ok(match (algo, input) {
        (Algo::Closest, Input::Points(t)) => closest_pair(t, s)?.map(Answer::Pair),
        (Algo::Segx { mode: Mode::Count }, Input::Segments(t)) => segx::count(t, s)?.map(Answer::Number),
        (Algo::Segx { mode: Mode::Enum }, Input::Segments(t)) => {
            let mut v = Vec::new();
            segx::enumerate(t, s, &mut |c| v.push(c))?.map(|_| Answer::Crossings(v))
        }
        (Algo::Axis { mode: Mode::Count }, Input::Segments(t)) => axcount::count_axis(t, s)?.map(Answer::Number),
        (Algo::Axis { mode: Mode::Enum }, Input::Segments(t)) => {
            let mut v = Vec::new();
            enumerate_axis(t, s, &mut |c| v.push(c))?.map(|_| Answer::Axis(v))
        }
        (Algo::Klee { sorted: true }, Input::Rects(t)) => measure_sorted(t, &corner_tape(t), s)?.map(Answer::Number),
        (Algo::Klee { sorted: false }, Input::Rects(t)) => measure_unsorted(t, s)?.map(Answer::Number),
        _ => unreachable!("input type follows the algorithm"),
    })
}

/// Compares with the oracle; `Err` describes the first difference.
fn verify(algo: Algo, input: &Input, got: &Answer) -> Result<(), String> {
    match (algo, input, got) {
        (_, Input::Points(t), Answer::Pair(p)) => match bf_closest(t) {
            Some(w) if w == *p => Ok(()),
            w => Err(format!("closest pair {p:?}, oracle {w:?}")),
        },
        (Algo::Segx { .. }, Input::Segments(t), _) => {
            let want = bf_intersections(t, Policy::General);
            match got {
                Answer::Crossings(v) => {
                    let mut v: Vec<_> = v.iter().map(|c| (c.i, c.j, c.kind)).collect();
                    v.sort();
                    (v == want).then_some(()).ok_or_else(|| diff(&v, &want))
                }
                _ => same_count(got.k(), want.len()),
            }
        }
        (Algo::Axis { .. }, Input::Segments(t), _) => {
            let want: Vec<_> = bf_intersections(t, Policy::AxisParallel).into_iter().map(|(i, j, _)| (i, j)).collect();
            match got {
                Answer::Axis(v) => {
                    let mut v: Vec<_> = v.iter().map(|c| (c.i, c.j)).collect();
                    v.sort();
                    (v == want).then_some(()).ok_or_else(|| diff(&v, &want))
                }
                _ => same_count(got.k(), want.len()),
            }
        }
        (_, Input::Rects(t), Answer::Number(a)) => {
            let want = bf_measure(t);
            (*a == want).then_some(()).ok_or_else(|| format!("area {a}, oracle {want}"))
        }
        _ => unreachable!("answer type follows the algorithm"),
    }
}

fn same_count(got: u64, want: usize) -> Result<(), String> {
    (got == want as u64).then_some(()).ok_or_else(|| format!("count {got}, oracle {want}"))
}

fn diff<T: PartialEq + std::fmt::Debug>(got: &[T], want: &[T]) -> String {
    let extra = got.iter().find(|x| !want.contains(x));
    let missing = want.iter().find(|x| !got.contains(x));
    format!("{} pairs, oracle {}; first extra {extra:?}, first missing {missing:?}", got.len(), want.len())
}

fn space(common: &Common, n: usize) -> u64 {
    common.space_bits.unwrap_or_else(|| (n.max(1) as u64) * lg(n as u64))
}

fn bench(algo: Algo, input: &Input, points: usize, reps: usize) -> Result<String, Fail> {
    let name = match algo {
        Algo::Closest => "closest",
        Algo::Segx { mode: Mode::Enum } => "segx_enum",
        Algo::Segx { mode: Mode::Count } => "segx_count",
        Algo::Axis { mode: Mode::Enum } => "axis_enum",
        Algo::Axis { mode: Mode::Count } => "axis_count",
        Algo::Klee { sorted: true } => "klee_sorted",
        Algo::Klee { sorted: false } => "klee",
    };
    let n = input.len();
    let mut out = String::from("algo,n,s,wall_ns,peak_bits,tape_reads,k\n");
    for s in par::space_grid(n, points) {
        let mut best = u128::MAX;
        let mut last = None;
        for _ in 0..reps.max(1) {
            let t0 = Instant::now();
            let o = run(algo, input, s)?;
            best = best.min(t0.elapsed().as_nanos());
            last = Some(o);
        }
        let o = last.unwrap();
        writeln!(out, "{name},{n},{s},{best},{},{},{}", o.peak_bits, o.tape_reads, o.value.k()).unwrap();
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<String, Fail> {
    let common = &cli.common;
    match &cli.cmd {
        Cmd::Run(algo) => {
            let input = load(*algo, &read_text(&common.input)?)?;
            Ok(run(*algo, &input, space(common, input.len()))?.value.render())
        }
        Cmd::Verify { algo } => {
            let input = load(*algo, &read_text(&common.input)?)?;
            let got = run(*algo, &input, space(common, input.len()))?.value;
            verify(*algo, &input, &got).map_err(Fail::Mismatch)?;
            Ok(got.render())
        }
        Cmd::Gen { kind, n, dup_rate, degenerate } => {
            if !(0.0..=1.0).contains(dup_rate) {
                return Err(Fail::Usage(format!("--dup-rate {dup_rate} outside [0, 1]")));
            }
            let cfg = GenConfig::new(*n, common.seed).dup_rate(*dup_rate).degenerate(*degenerate);
            Ok(match kind {
                GenKind::Points => Tape::points(gen::points(&cfg)?)?.to_text(),
                GenKind::Segments => Tape::segments(gen::segments(&cfg.max_len(1 << 14))?)?.to_text(),
                GenKind::Axis => Tape::axis_segments(gen::axis(&cfg.max_len(1 << 18))?)?.to_text(),
                GenKind::Rects => Tape::rects(gen::rects(&cfg.max_len(1 << 17))?)?.to_text(),
            })
        }
        Cmd::Bench { algo, n, points, reps } => {
            let input = match &common.input {
                Some(_) => load(*algo, &read_text(&common.input)?)?,
                None => generate(*algo, *n, common.seed)?,
            };
            bench(*algo, &input, *points, *reps)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match execute(&cli) {
        Ok(text) => (text, 0),
        Err(Fail::Usage(m)) => (format!("error: {m}"), 2),
        Err(Fail::Mismatch(m)) => (format!("mismatch: {m}"), 3),
        Err(Fail::Budget(m)) => (format!("error: {m}"), 4),
    };
    if code != 0 {
        eprintln!("{text}");
        return ExitCode::from(code);
    }
    let written = match &cli.common.out {
        Some(p) => std::fs::write(p, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
