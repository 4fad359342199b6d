//! The `linkforge` command line: diagrams in (files or `-` for stdin),
//! diagrams, polynomials or JSON out.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::compose::{self, ClosurePattern, Side, TangleDiagram};
use crate::error::{Error, Result};
use crate::invariants::{conway, jones_with, seifert_circles, Limits};
use crate::laurent::HalfLaurent;
use crate::obstruct::{builtin_table, exclude_local_knot, scan_table};
use crate::pdcode::Diagram;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "linkforge", version, about = "Exact link invariants and string-link constructions")]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Diagram file (JSON or PD text), or `-` for standard input.
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a link diagram or string link and summarize it.
    Validate(Input),
    /// Writhe, linking numbers, Jones, Conway and Seifert data.
    Invariants(Input),
    /// Jones polynomial.
    Jones(Input),
    /// Conway polynomial.
    Conway(Input),
    /// Connected sum of component I of the first link with component J of the second.
    Sum {
        first: PathBuf,
        second: PathBuf,
        /// Component of the first link (from 1).
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Component of the second link (from 1).
        #[arg(long, default_value_t = 1)]
        j: usize,
        /// Arc of the first link to cut (default: first arc of component I).
        #[arg(long)]
        arc_l: Option<u32>,
        /// Arc of the second link to cut (default: first arc of component J).
        #[arg(long)]
        arc_k: Option<u32>,
    },
    /// Close a string link.
    Close {
        input: PathBuf,
        /// Permutation in cycle notation, e.g. "(1 2)(3)"; fixed strands may be omitted.
        #[arg(long, default_value = "id")]
        pattern: String,
        /// Direction of the first strand of each cycle: top (upward) or bottom.
        #[arg(long, default_value = "top")]
        side: String,
    },
    /// Closure of a string link stacked on its reflection.
    Double(Input),
    /// Reflect a string link top to bottom.
    Reflect(Input),
    /// Mirror image (every crossing switched) of a link or string link.
    Mirror(Input),
    /// Test whether knots can be local knots of a link by Jones divisibility.
    Obstruct {
        /// Link diagram (omit when --jones is given).
        input: Option<PathBuf>,
        /// Knot from the built-in table (default: the whole table).
        #[arg(long, conflicts_with = "knot_file")]
        knot: Option<String>,
        /// Knot diagram file.
        #[arg(long)]
        knot_file: Option<PathBuf>,
        /// Jones polynomial of the link, instead of a diagram.
        #[arg(long, conflicts_with = "input")]
        jones: Option<String>,
    },
    /// List the built-in knot table.
    Table,
}

/// Either kind of input file.
enum Parsed {
    Link(Diagram),
    Tangle(TangleDiagram),
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    json: bool,
    limits: Limits,
}

impl Ctx<'_> {
    fn read(&mut self, path: &Path) -> Result<String> {
        if path.as_os_str() == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s)?;
            Ok(s)
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
        }
    }

    fn parsed(&mut self, path: &Path) -> Result<Parsed> {
        let text = self.read(path)?;
        let is_tangle = serde_json::from_str::<Value>(text.trim()).is_ok_and(|v| v.get("endpoints").is_some());
        Ok(if is_tangle { Parsed::Tangle(TangleDiagram::parse(&text)?) } else { Parsed::Link(Diagram::parse(&text)?) })
    }

    fn link(&mut self, path: &Path) -> Result<Diagram> {
        match self.parsed(path)? {
            Parsed::Link(d) => Ok(d),
            Parsed::Tangle(_) => Err(Error::validation("expected a link diagram, got a string link (close it first)")),
        }
    }

    fn tangle(&mut self, path: &Path) -> Result<TangleDiagram> {
        match self.parsed(path)? {
            Parsed::Tangle(t) => Ok(t),
            Parsed::Link(_) => Err(Error::validation("expected a string link with \"endpoints\", got a closed diagram")),
        }
    }

    fn jones(&self, d: &Diagram) -> Result<HalfLaurent> {
        jones_with(d, self.limits)
    }

    /// A polynomial as text, or `{"key": "..."}` with --json.
    fn poly(&self, key: &str, p: impl ToString) -> String {
        if self.json {
            json!({ key: p.to_string() }).to_string()
        } else {
            p.to_string()
        }
    }
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            return if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            } else {
                let _ = write!(stderr, "{}", e.render());
                EXIT_USAGE
            };
        }
    };
    let limits = match Limits::from_env() {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx { stdin, json: cli.json, limits };
    match execute(&mut ctx, cli.command) {
        Ok(out) => {
            let _ = writeln!(stdout, "{out}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::CrossingCap { .. } => EXIT_CAP,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn execute(ctx: &mut Ctx<'_>, cmd: Command) -> Result<String> {
    match cmd {
        Command::Validate(Input { input }) => validate(ctx, &input),
        Command::Invariants(Input { input }) => {
            let d = ctx.link(&input)?;
            let v = invariants(ctx, &d)?;
            Ok(if ctx.json { v.to_string() } else { serde_json::to_string_pretty(&v)? })
        }
        Command::Jones(Input { input }) => {
            let d = ctx.link(&input)?;
            Ok(ctx.poly("jones", ctx.jones(&d)?))
        }
        Command::Conway(Input { input }) => {
            let d = ctx.link(&input)?;
            Ok(ctx.poly("conway", conway(&d)?))
        }
        Command::Sum { first, second, i, j, arc_l, arc_k } => {
            if i == 0 || j == 0 {
                return Err(Error::domain("components are numbered from 1"));
            }
            let l = ctx.link(&first)?;
            let k = ctx.link(&second)?;
            Ok(compose::hashizume_sum(&l, i - 1, &k, j - 1, arc_l, arc_k)?.to_json())
        }
        Command::Close { input, pattern, side } => {
            let t = ctx.tangle(&input)?;
            let p = pattern.parse::<ClosurePattern>()?.with_side(side.parse::<Side>()?);
            Ok(compose::close(&t, &p)?.to_json())
        }
        Command::Double(Input { input }) => Ok(compose::double(&ctx.tangle(&input)?)?.to_json()),
        Command::Reflect(Input { input }) => Ok(compose::reflect(&ctx.tangle(&input)?).to_json()),
        Command::Mirror(Input { input }) => Ok(match ctx.parsed(&input)? {
            Parsed::Link(d) => d.mirror().to_json(),
            Parsed::Tangle(t) => t.mirror().to_json(),
        }),
        Command::Obstruct { input, knot, knot_file, jones } => obstruct(ctx, input, knot, knot_file, jones),
        Command::Table => {
            let table = builtin_table()?;
            let rows: Vec<Value> = table
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "crossings": e.diagram.crossing_count(),
                        "jones": e.jones.to_string(),
                        "conway": e.conway.to_string(),
                    })
                })
                .collect();
            if ctx.json {
                Ok(Value::Array(rows).to_string())
            } else {
                Ok(table
                    .iter()
                    .map(|e| format!("{}\t{}\t{}", e.name, e.jones, e.conway))
                    .collect::<Vec<_>>()
                    .join("\n"))
            }
        }
    }
}

fn validate(ctx: &mut Ctx<'_>, input: &Path) -> Result<String> {
    let v = match ctx.parsed(input)? {
        Parsed::Link(d) => json!({
            "valid": true,
            "kind": "link",
            "crossings": d.crossing_count(),
            "components": d.component_count(),
            "free_loops": d.free_loops(),
        }),
        Parsed::Tangle(t) => json!({
            "valid": true,
            "kind": "string link",
            "crossings": t.crossing_count(),
            "strands": t.strand_count(),
            "free_loops": t.free_loops(),
        }),
    };
    if ctx.json {
        return Ok(v.to_string());
    }
    Ok(match v["kind"].as_str() {
        Some("link") => format!(
            "valid link: {} crossings, {} component(s)",
            v["crossings"], v["components"]
        ),
        _ => format!("valid string link: {} crossings, {} strand(s)", v["crossings"], v["strands"]),
    })
}

fn invariants(ctx: &Ctx<'_>, d: &Diagram) -> Result<Value> {
    let split = d.is_visibly_split();
    let mut v = json!({
        "components": d.component_count(),
        "crossings": d.crossing_count(),
        "writhe": d.writhe(),
        "linking_matrix": d.linking_matrix(),
        "visibly_split": split,
        "jones": ctx.jones(d)?.to_string(),
    });
    if !split {
        let s = seifert_circles(d)?;
        v["conway"] = json!(conway(d)?.to_string());
        v["seifert"] = json!({ "s": s.circles, "c": s.crossings, "betti": s.betti });
    }
    Ok(v)
}

fn obstruct(
    ctx: &mut Ctx<'_>,
    input: Option<PathBuf>,
    knot: Option<String>,
    knot_file: Option<PathBuf>,
    jones: Option<String>,
) -> Result<String> {
    let v_link = match (jones, input) {
        (Some(p), _) => p.parse::<HalfLaurent>()?,
        (None, Some(path)) => {
            let d = ctx.link(&path)?;
            ctx.jones(&d)?
        }
        (None, None) => return Err(Error::domain("give a link diagram or --jones")),
    };
    let candidate = if let Some(path) = knot_file {
        let k = ctx.link(&path)?;
        if k.component_count() != 1 {
            return Err(Error::domain("--knot-file must hold a knot"));
        }
        let v = ctx.jones(&k)?;
        Some((k.name().unwrap_or("knot").to_string(), v))
    } else if let Some(name) = knot {
        let table = builtin_table()?;
        let e = table.iter().find(|e| e.name == name).ok_or_else(|| {
            let names: Vec<&str> = table.iter().map(|e| e.name.as_str()).collect();
            Error::domain(format!("no knot named {name:?} in the table (known: {})", names.join(", ")))
        })?;
        Some((e.name.clone(), e.jones.clone()))
    } else {
        None
    };
    match candidate {
        Some((name, v_knot)) => {
            let verdict = exclude_local_knot(&v_link, &v_knot)?;
            let mirror = exclude_local_knot(&v_link, &v_knot.substitute_inverse())?;
            if ctx.json {
                Ok(json!({ "knot": name, "verdict": verdict, "mirror_verdict": mirror }).to_string())
            } else {
                Ok(verdict.to_string())
            }
        }
        None => {
            let results = scan_table(&v_link, &builtin_table()?)?;
            if ctx.json {
                Ok(serde_json::to_string(&results)?)
            } else {
                Ok(results
                    .iter()
                    .map(|r| format!("{}{}\t{}", r.name, if r.mirror { " (mirror)" } else { "" }, r.verdict))
                    .collect::<Vec<_>>()
                    .join("\n"))
            }
        }
    }
}
