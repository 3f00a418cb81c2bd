mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semigens::asymptotics::{bounds_report, BoundsConfig};
use semigens::exact::{bound_p, exact_g, exact_t, exact_v, to_decimal};
use semigens::gensets::{
    enumerate_irredundant_generating_sets, greedy, is_irredundant, is_ubiquitous,
    satisfies_sufficient_condition, semigroup_rank, small_generating_set, smallest_generating_set,
    validate_generators, DEFAULT_IRREDUNDANT_CEILING, DEFAULT_RANK_CEILING,
};
use semigens::greens::{d_classes, ordered_elements, Direction};
use semigens::montecarlo::{estimate, estimate_sufficient, Interval, Quantity, SamplingConfig};
use semigens::semigroup::{SemigroupTable, DEFAULT_MAX_ELEMENTS};
use semigens::table1::table1;
use semigens::transform::{parse_set, Transformation};
use semigens::Error;

use output::{emit, Format};

/// Degrees above this get a size warning before closure.
const LARGE_DEGREE: usize = 6;

#[derive(Parser)]
#[command(name = "semigens", version, about = "Generating sets and random-generation probabilities for transformation semigroups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for sampling commands.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for `mc` and `table1`.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Abort with exit code 2 after this many milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    /// Largest semigroup the closure may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Input {
    /// Transformation literals such as `[2,3,1]`, forming one set.
    literals: Vec<String>,
    /// Read sets from a file instead: one set per line, `#` comments.
    #[arg(long, short = 'f', conflicts_with = "literals")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Desc,
    Asc,
}

impl From<Order> for Direction {
    fn from(o: Order) -> Self {
        match o {
            Order::Desc => Direction::Descending,
            Order::Asc => Direction::Ascending,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactQuantity {
    G,
    T,
    V,
    P,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the semigroup generated by the input.
    Closure {
        #[command(flatten)]
        input: Input,
    },
    /// D-classes and their order.
    Greens {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Order::Desc)]
        order: Order,
    },
    /// Greedy scan over the input, taken as the full element list in order.
    Greedy {
        #[command(flatten)]
        input: Input,
    },
    /// Greedy scan over the elements listed along the J-order.
    Smallgen {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Order::Desc)]
        order: Order,
    },
    /// All irredundant generating sets of the generated semigroup.
    Irredundant {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_IRREDUNDANT_CEILING)]
        ceiling: usize,
    },
    /// Exact rank of the generated semigroup.
    Rank {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_RANK_CEILING)]
        ceiling: usize,
    },
    /// Whether every irredundant generating set has the same size.
    Ubiquity {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_IRREDUNDANT_CEILING)]
        ceiling: usize,
    },
    /// Whether rank(xyz) < rank(y) for every triple from the input.
    Suffcond {
        #[command(flatten)]
        input: Input,
    },
    /// Exact probability as a reduced fraction.
    Exact {
        #[arg(value_enum, ignore_case = true)]
        quantity: ExactQuantity,
        #[arg(long)]
        n: usize,
        /// Number of generators, for P.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Monte Carlo estimate.
    Mc {
        #[arg(long)]
        quantity: Quantity,
        #[arg(long)]
        n: usize,
        /// Number of generators, for SUFF.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Wilson score interval instead of the normal approximation.
        #[arg(long)]
        wilson: bool,
    },
    /// Constants, stationary points and grid maxima with their bracket checks.
    Bounds {
        #[arg(long, default_value_t = BoundsConfig::default().single_resolution)]
        single_resolution: usize,
        #[arg(long, default_value_t = BoundsConfig::default().square_resolution)]
        square_resolution: usize,
        #[arg(long, default_value_t = BoundsConfig::default().simplex_resolution)]
        simplex_resolution: usize,
    },
    /// Rank against SmallGeneratingSet output over all subsemigroups of T_3.
    Table1 {
        #[arg(long, value_enum, default_value_t = Order::Desc)]
        order: Order,
        /// Include every class in the output.
        #[arg(long)]
        classes: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Parse(_) => 1,
        Error::ResourceLimit(_) => 2,
        Error::Domain(_) | Error::Numeric(_) => 3,
    }
}

fn read_sets(input: &Input) -> Result<Vec<Vec<Transformation>>, Error> {
    let sets = match &input.file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            text.lines()
                .map(parse_set)
                .filter(|s| !matches!(s, Ok(v) if v.is_empty()))
                .collect::<Result<Vec<_>, _>>()?
        }
        None => vec![parse_set(&input.literals.join(" "))?],
    };
    if sets.is_empty() {
        return Err(Error::InvalidInput("no transformations given".into()));
    }
    for set in &sets {
        let degree = validate_generators(set)?;
        if degree > LARGE_DEGREE {
            eprintln!("warning: degree {degree} semigroups can be very large; consider --max-elements or --budget-ms");
        }
    }
    Ok(sets)
}

/// Runs `f` on each input set and emits one record per set.
fn per_set(
    cli: &Cli,
    input: &Input,
    mut f: impl FnMut(&[Transformation]) -> Result<Value, Error>,
) -> Result<(), Error> {
    for set in read_sets(input)? {
        emit(cli.format, f(&set)?);
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    let close = |set: &[Transformation]| SemigroupTable::closure_with_limit(set, cli.max_elements);
    match &cli.command {
        Command::Closure { input } => per_set(cli, input, |set| {
            let table = close(set)?;
            Ok(json!({ "size": table.len(), "table": table.export() }))
        }),
        Command::Greens { input, order } => per_set(cli, input, |set| {
            let table = close(set)?;
            let d = d_classes(&table);
            let ordered = ordered_elements(&table, &d, (*order).into());
            Ok(json!({
                "size": table.len(),
                "class_count": d.len(),
                "elements": table.elements(),
                "greens": d.export(),
                "ordered_elements": ordered,
                "order": Direction::from(*order),
            }))
        }),
        Command::Greedy { input } => per_set(cli, input, |set| Ok(serde_json::to_value(greedy(set)?).unwrap())),
        Command::Smallgen { input, order } => per_set(cli, input, |set| {
            let table = close(set)?;
            Ok(serde_json::to_value(small_generating_set(&table, (*order).into())?).unwrap())
        }),
        Command::Irredundant { input, ceiling } => per_set(cli, input, |set| {
            let table = close(set)?;
            let sets = enumerate_irredundant_generating_sets(&table, *ceiling)?;
            let mut sizes: Vec<usize> = sets.iter().map(Vec::len).collect();
            sizes.sort_unstable();
            sizes.dedup();
            Ok(json!({
                "semigroup_size": table.len(),
                "count": sets.len(),
                "sizes": sizes,
                "sets": sets,
            }))
        }),
        Command::Rank { input, ceiling } => per_set(cli, input, |set| {
            let table = close(set)?;
            let rank = semigroup_rank(&table, *ceiling)?;
            let witness = smallest_generating_set(&table, *ceiling)?;
            Ok(json!({ "semigroup_size": table.len(), "rank": rank, "generating_set": witness }))
        }),
        Command::Ubiquity { input, ceiling } => per_set(cli, input, |set| {
            let table = close(set)?;
            Ok(json!({
                "semigroup_size": table.len(),
                "ubiquitous": is_ubiquitous(&table, *ceiling)?,
                "rank": semigroup_rank(&table, (*ceiling).max(DEFAULT_RANK_CEILING))?,
                "generators_satisfy_condition": satisfies_sufficient_condition(set)?,
                "generators_irredundant": is_irredundant(set)?,
            }))
        }),
        Command::Suffcond { input } => per_set(cli, input, |set| {
            Ok(json!({ "generators": set, "satisfies": satisfies_sufficient_condition(set)? }))
        }),
        Command::Exact {
            quantity,
            n,
            k,
            digits,
        } => {
            let (name, value) = match quantity {
                ExactQuantity::G => ("G", exact_g(*n)?),
                ExactQuantity::T => ("T", exact_t(*n)?),
                ExactQuantity::V => ("V", exact_v(*n)?),
                ExactQuantity::P => ("P", bound_p(*n, *k)?),
            };
            let mut record = json!({
                "quantity": name,
                "n": n,
                "value": value.to_string(),
                "decimal": to_decimal(&value, *digits),
            });
            if matches!(quantity, ExactQuantity::P) {
                record["k"] = json!(k);
            }
            emit(cli.format, record);
            Ok(())
        }
        Command::Mc {
            quantity,
            n,
            k,
            samples,
            wilson,
        } => {
            let config = SamplingConfig::new(*samples, cli.seed)
                .workers(cli.workers)
                .interval(if *wilson { Interval::Wilson } else { Interval::Normal });
            let e = match quantity {
                Quantity::Suff => estimate_sufficient(*n, *k, &config)?,
                q => estimate(*q, *n, &config)?,
            };
            emit(cli.format, serde_json::to_value(e).unwrap());
            Ok(())
        }
        Command::Bounds {
            single_resolution,
            square_resolution,
            simplex_resolution,
        } => {
            let report = bounds_report(BoundsConfig {
                single_resolution: *single_resolution,
                square_resolution: *square_resolution,
                simplex_resolution: *simplex_resolution,
            })?;
            let all_pass = report.checks.iter().all(|c| c.pass);
            let mut value = serde_json::to_value(report).unwrap();
            value["all_checks_pass"] = json!(all_pass);
            emit(cli.format, value);
            Ok(())
        }
        Command::Table1 { order, classes } => {
            let t = table1((*order).into(), cli.workers)?;
            let mut value = json!({
                "order": t.direction,
                "class_count": t.class_count,
                "rank_distribution": t.rank_distribution(),
                "mean_output_size": t.mean_output_size,
                "rows": t.rows,
                "diff_against_published": t.diff_against_published(),
            });
            if *classes {
                value["classes"] = serde_json::to_value(&t.classes).unwrap();
            }
            emit(cli.format, value);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(ms) = cli.budget_ms {
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_millis(ms));
            eprintln!("error: time budget of {ms} ms exceeded");
            std::process::exit(2);
        });
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::Parse(String::new())), 1);
        assert_eq!(exit_code(&Error::InvalidInput(String::new())), 1);
        assert_eq!(exit_code(&Error::ResourceLimit(String::new())), 2);
        assert_eq!(exit_code(&Error::Numeric(String::new())), 3);
        assert_eq!(exit_code(&Error::Domain(String::new())), 3);
    }
}
