use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use bpreduce::barrington::{parse_formula, to_width5_bp};
use bpreduce::bp::{all_assignments, corpus, parse_bp, random_bp, serialize_bp, BranchingProgram, RandomBpParams};
use bpreduce::direct::{reduce_direct, GadgetBuilder, Side};
use bpreduce::framework::{Binding, FinalSequences, FrameworkReduction, LcsBinding, LevelConstants};
use bpreduce::measures::{
    k_lcs, parse_sequence, unweighted_lcs, write_sequence, write_unweighted, WeightedSequence,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{emit, int, object, write_json};
use crate::{status, Engine, Measure};

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_program(path: &Path) -> Result<BranchingProgram> {
    parse_bp(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn gen(n: usize, width: usize, t: u32, density: f64, seed: u64, out: Option<&Path>) -> Result<u8> {
    let bp = random_bp(&RandomBpParams { n, width, t, density }, seed)?;
    write_out(out, &serialize_bp(&bp))?;
    Ok(0)
}

pub fn compile_formula(input: &Path, out: Option<&Path>) -> Result<u8> {
    let formula = parse_formula(read_text(input)?.trim())?;
    write_out(out, &serialize_bp(&to_width5_bp(&formula)?))?;
    Ok(0)
}

pub struct ReduceConfig {
    pub program: PathBuf,
    pub engine: Engine,
    pub measure: Measure,
    pub parties: usize,
    pub assignment: Option<String>,
    pub out_dir: PathBuf,
    pub max_expand: u64,
}

fn program_fields(bp: &BranchingProgram) -> Vec<(&'static str, Value)> {
    vec![
        ("n", int(bp.num_vars())),
        ("width", int(bp.width())),
        ("layers", int(bp.num_layers())),
    ]
}

fn write_pair(dir: &Path, a: &WeightedSequence, b: &WeightedSequence, measure: Measure, max_expand: u64) -> Result<()> {
    for (name, seq) in [("a.seq", a), ("b.seq", b)] {
        let text = match measure {
            Measure::Lcs => write_unweighted(seq.alphabet().len(), &seq.unweight(max_expand)?),
            _ => write_sequence(seq),
        };
        std::fs::write(dir.join(name), text).with_context(|| format!("writing {name}"))?;
    }
    Ok(())
}

fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(anyhow!("assignment must be a string of 0s and 1s")),
        })
        .collect()
}

pub fn reduce(cfg: &ReduceConfig) -> Result<u8> {
    let bp = read_program(&cfg.program)?;
    std::fs::create_dir_all(&cfg.out_dir).with_context(|| format!("creating {}", cfg.out_dir.display()))?;
    let manifest = match (cfg.engine, cfg.measure) {
        (Engine::Direct, Measure::Klcs) => reduce_parties(&bp, cfg)?,
        (Engine::Direct, measure) => {
            let red = reduce_direct(&bp)?;
            write_pair(&cfg.out_dir, &red.a, &red.b, measure, cfg.max_expand)?;
            let mut fields = vec![
                ("engine", json!("direct")),
                ("measure", json!(measure_name(measure))),
                ("threshold", int(red.threshold)),
                ("a_length", int(red.a.total_length())),
                ("b_length", int(red.b.total_length())),
                ("predicted_a_length", int(red.predicted_a_length())),
                ("predicted_b_length", int(red.predicted_b_length())),
                ("a_entries", int(red.a_entries)),
                ("b_entries", int(red.b_entries)),
                ("gadget_weight", int(red.gadget_weight)),
                ("separator_weight", int(red.separator_weight)),
                ("marker_weight", int(red.marker_weight)),
                ("dummy_weight", int(red.dummy_weight)),
                ("z", Value::Array(red.tables.z.iter().map(int).collect())),
                ("y", Value::Array(red.tables.y.iter().map(int).collect())),
            ];
            fields.extend(program_fields(&bp));
            object(fields)
        }
        (Engine::Framework, Measure::Klcs) => bail!("the framework engine has no k-LCS variant"),
        (Engine::Framework, measure) => {
            let mut red = FrameworkReduction::new(LcsBinding::new()?, &bp)?;
            let fin = red.final_sequences()?;
            let alphabet = red.binding().alphabet().snapshot();
            let x = WeightedSequence::new(alphabet.clone(), fin.x.seq.clone())?;
            let y = WeightedSequence::new(alphabet, fin.y.seq.clone())?;
            write_pair(&cfg.out_dir, &x, &y, measure, cfg.max_expand)?;
            let constants = framework_constants(red.constants(), &fin, red.binding().size_constant());
            write_json(&cfg.out_dir.join("constants.json"), &constants)?;
            let mut fields = vec![
                ("engine", json!("framework")),
                ("measure", json!(measure_name(measure))),
                ("threshold", int(fin.threshold)),
                ("unsat_value", int(fin.unsat_value)),
                ("a_length", int(fin.x.tag.length)),
                ("b_length", int(fin.y.tag.length)),
            ];
            fields.extend(program_fields(&bp));
            object(fields)
        }
    };
    write_json(&cfg.out_dir.join("manifest.json"), &manifest)?;
    println!("wrote {}", cfg.out_dir.display());
    Ok(0)
}

fn reduce_parties(bp: &BranchingProgram, cfg: &ReduceConfig) -> Result<Value> {
    let bits = parse_bits(cfg.assignment.as_deref().ok_or_else(|| anyhow!("--measure klcs needs --assignment"))?)?;
    if bits.len() != bp.num_vars() {
        bail!("assignment has {} bits, the program reads {}", bits.len(), bp.num_vars());
    }
    let gb = GadgetBuilder::with_parties(bp, cfg.parties)?;
    let alphabet = gb.alphabet().snapshot();
    let mut files = Vec::new();
    for (i, block) in bits.chunks(gb.block()).enumerate() {
        let party = i + 1;
        let seq = WeightedSequence::new(alphabet.clone(), gb.vector_gadget_party(party, block)?)?;
        let name = format!("p{party}.seq");
        std::fs::write(cfg.out_dir.join(&name), write_sequence(&seq))?;
        files.push(json!(name));
    }
    let t = gb.depth();
    let mut fields = vec![
        ("engine", json!("direct")),
        ("measure", json!("klcs")),
        ("parties", int(cfg.parties)),
        ("threshold", int(&gb.tables().y[t])),
        ("gadget_weight", int(&gb.tables().z[t])),
        ("files", Value::Array(files)),
    ];
    fields.extend(program_fields(bp));
    Ok(object(fields))
}

fn measure_name(m: Measure) -> &'static str {
    match m {
        Measure::Wlcs => "wlcs",
        Measure::Lcs => "lcs",
        Measure::Klcs => "klcs",
    }
}

fn framework_constants(c: &LevelConstants, fin: &FinalSequences, size_constant: u64) -> Value {
    let levels: Vec<Value> = c
        .levels
        .iter()
        .enumerate()
        .map(|(k, l)| {
            json!({
                "level": int(k),
                "rho": int(l.rho),
                "path_offset": int(l.path_offset),
                "combine_offset": int(l.combine_offset),
                "length_x": int(l.tau_x.length),
                "length_y": int(l.tau_y.length),
            })
        })
        .collect();
    let (ex, ey) = fin.entry_tags;
    let largest = fin.x.tag.length.max(fin.y.tag.length);
    let scale = 2 * fin.a_halves as u64 * (ex.length + ey.length);
    object([
        ("rho_true", int(c.rho_true)),
        ("rho_false", int(c.rho_false)),
        ("index_bits", int(c.index_bits)),
        ("levels", Value::Array(levels)),
        ("nvg_offset", int(fin.nvg_offset)),
        ("final_offset", int(fin.final_offset)),
        ("threshold", int(fin.threshold)),
        ("unsat_value", int(fin.unsat_value)),
        ("size_constant", int(size_constant)),
        ("realized_c", json!(format!("{:.4}", largest as f64 / scale as f64))),
        ("length_x", int(fin.x.tag.length)),
        ("length_y", int(fin.y.tag.length)),
    ])
}

fn read_sequences(files: &[PathBuf]) -> Result<Vec<WeightedSequence>> {
    let seqs = files
        .iter()
        .map(|f| parse_sequence(&read_text(f)?).with_context(|| format!("in {}", f.display())))
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = seqs.first() {
        if seqs.iter().any(|s| s.alphabet().weights() != first.alphabet().weights()) {
            bail!("sequence files use different alphabets");
        }
    }
    Ok(seqs)
}

pub fn solve(files: &[PathBuf], measure: Measure, manifest: Option<&Path>, report: Option<&Path>) -> Result<u8> {
    let seqs = read_sequences(files)?;
    let value = match measure {
        Measure::Wlcs | Measure::Lcs => {
            let [a, b] = seqs.as_slice() else { bail!("{} needs exactly two files", measure_name(measure)) };
            unweighted_lcs(a, b)
        }
        Measure::Klcs => {
            if seqs.len() < 2 {
                bail!("klcs needs at least two files");
            }
            let refs: Vec<&[u32]> = seqs.iter().map(|s| s.symbols()).collect();
            k_lcs(&refs, Some(seqs[0].alphabet().weights()))?
        }
    };
    let total: u64 = seqs.iter().map(|s| s.total_length()).sum();
    let mut fields = vec![
        ("measure", json!(measure_name(measure))),
        ("value", int(value)),
        ("lengths", Value::Array(seqs.iter().map(|s| int(s.total_length())).collect())),
    ];
    let mut line = format!("{} = {value}", measure_name(measure));
    if seqs.len() == 2 {
        fields.push(("distance", int(total - 2 * value)));
        line.push_str(&format!(", distance {}", total - 2 * value));
    }
    if let Some(path) = manifest {
        let m: Value = serde_json::from_str(&read_text(path)?).context("reading manifest")?;
        let threshold = string_int(&m, "threshold")?;
        let accepts = match m["engine"].as_str() {
            Some("framework") => i128::from(total - 2 * value) <= threshold,
            _ if measure == Measure::Klcs => i128::from(value) == threshold,
            _ => i128::from(value) >= threshold,
        };
        fields.push(("threshold", int(threshold)));
        fields.push(("accepts", json!(accepts)));
        line.push_str(&format!(", threshold {threshold}, {}", if accepts { "accept" } else { "reject" }));
    }
    println!("{line}");
    emit(report, &object(fields))?;
    Ok(0)
}

fn string_int(v: &Value, key: &str) -> Result<i128> {
    v[key]
        .as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| anyhow!("manifest field {key} is missing or not an integer string"))
}

struct Row {
    index: usize,
    params: RandomBpParams,
    seed: u64,
    value: String,
    threshold: String,
    verdict: bool,
    oracle: bool,
}

fn check_instance(engine: Engine, bp: &BranchingProgram) -> Result<(String, String, bool)> {
    Ok(match engine {
        Engine::Direct => {
            let red = reduce_direct(bp)?;
            let value = unweighted_lcs(&red.a, &red.b);
            (value.to_string(), red.threshold.to_string(), red.accepts(value))
        }
        Engine::Framework => {
            let mut red = FrameworkReduction::new(LcsBinding::new()?, bp)?;
            let fin = red.final_sequences()?;
            let delta = red.delta(&fin.x, &fin.y);
            (delta.to_string(), fin.threshold.to_string(), fin.accepts(delta))
        }
    })
}

pub fn verify(engine: Engine, count: usize, seed: u64, jobs: Option<usize>, max_vars: usize, report: Option<&Path>) -> Result<u8> {
    if max_vars == 0 {
        bail!("--max-vars must be positive");
    }
    let entries = corpus(count, seed);
    if let Some(e) = entries.iter().find(|e| e.params.n > max_vars) {
        return Err(bpreduce::Error::Refused(format!("instance with n = {} exceeds --max-vars {max_vars}", e.params.n)).into());
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            bail!("--jobs must be positive");
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build()?;
    let rows = pool.install(|| {
        entries
            .par_iter()
            .enumerate()
            .map(|(index, e)| {
                let bp = e.build()?;
                let (value, threshold, verdict) = check_instance(engine, &bp)?;
                // The oracle only feeds the comparison column.
                let oracle = bp.brute_force_sat()?.is_some();
                Ok(Row { index, params: e.params, seed: e.seed, value, threshold, verdict, oracle })
            })
            .collect::<Result<Vec<Row>>>()
    })?;
    let disagreements = rows.iter().filter(|r| r.verdict != r.oracle).count();
    println!("{:>5} {:>2} {:>2} {:>2} {:>5} {:>8} {:>14} {:>14} {:>7} {:>7}", "index", "n", "W", "t", "dens", "seed", "value", "threshold", "verdict", "oracle");
    for r in &rows {
        println!(
            "{:>5} {:>2} {:>2} {:>2} {:>5.2} {:>8} {:>14} {:>14} {:>7} {:>7}{}",
            r.index, r.params.n, r.params.width, r.params.t, r.params.density, r.seed,
            r.value, r.threshold, sat_word(r.verdict), sat_word(r.oracle),
            if r.verdict == r.oracle { "" } else { "  DISAGREE" }
        );
    }
    println!("{} instances, {disagreements} disagreements", rows.len());
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "index": int(r.index),
                "n": int(r.params.n),
                "width": int(r.params.width),
                "t": int(r.params.t),
                "density": r.params.density,
                "seed": int(r.seed),
                "value": r.value,
                "threshold": r.threshold,
                "verdict": r.verdict,
                "oracle": r.oracle,
            })
        })
        .collect();
    emit(
        report,
        &object([
            ("engine", json!(match engine { Engine::Direct => "direct", Engine::Framework => "framework" })),
            ("instances", int(rows.len())),
            ("disagreements", int(disagreements)),
            ("rows", Value::Array(json_rows)),
        ]),
    )?;
    Ok(if disagreements == 0 { 0 } else { status::DISAGREEMENT })
}

fn sat_word(b: bool) -> &'static str {
    if b {
        "sat"
    } else {
        "unsat"
    }
}

pub fn stats(program: &Path, engine: Engine, report: Option<&Path>) -> Result<u8> {
    let bp = read_program(program)?;
    let value = match engine {
        Engine::Direct => direct_stats(&bp)?,
        Engine::Framework => framework_stats(&bp)?,
    };
    emit(report, &value)?;
    Ok(if value["ok"] == json!(true) { 0 } else { status::DISAGREEMENT })
}

fn direct_stats(bp: &BranchingProgram) -> Result<Value> {
    let red = reduce_direct(bp)?;
    let gb = GadgetBuilder::new(bp)?;
    let t = gb.depth() as u32;
    let w = bp.width() as u128;
    let closed = (w * (36 * w + 26))
        .checked_pow(t)
        .ok_or_else(|| anyhow!("closed form overflows"))?;
    let mut gadgets_ok = true;
    for h in all_assignments(bp.half()?) {
        for side in [Side::A, Side::B] {
            let len = gb.weight(&gb.vector_gadget(side, &h)?)?;
            gadgets_ok &= u128::from(len) == closed;
        }
    }
    let a_ok = red.a.total_length() == red.predicted_a_length();
    let b_ok = red.b.total_length() == red.predicted_b_length();
    println!("vector gadget length {closed} (closed form), all gadgets match: {gadgets_ok}");
    println!("|A| = {} predicted {}", red.a.total_length(), red.predicted_a_length());
    println!("|B| = {} predicted {}", red.b.total_length(), red.predicted_b_length());
    Ok(object([
        ("engine", json!("direct")),
        ("gadget_length", int(closed)),
        ("gadgets_match", json!(gadgets_ok)),
        ("a_length", int(red.a.total_length())),
        ("predicted_a_length", int(red.predicted_a_length())),
        ("b_length", int(red.b.total_length())),
        ("predicted_b_length", int(red.predicted_b_length())),
        ("ok", json!(gadgets_ok && a_ok && b_ok)),
    ]))
}

fn framework_stats(bp: &BranchingProgram) -> Result<Value> {
    let mut red = FrameworkReduction::new(LcsBinding::new()?, bp)?;
    let fin = red.final_sequences()?;
    let c = red.binding().size_constant() as f64;
    let consts = red.constants().clone();
    let base = consts.levels[0];
    let l0 = (base.tau_x.length + base.tau_y.length) as f64;
    let w = bp.width() as f64;
    let growth = 12.0 * w * w * c.powi(3);
    let mut ok = true;
    for (k, level) in consts.levels.iter().enumerate() {
        let len = (level.tau_x.length + level.tau_y.length) as f64;
        let bound = growth.powi(k as i32) * l0;
        ok &= len <= bound;
        println!("level {k}: length {len} bound {bound:.3e} rho {}", level.rho);
    }
    println!(
        "final |x| = {}, |y| = {}; bound shape T^{:.2} with T = {}",
        fin.x.tag.length,
        fin.y.tag.length,
        growth.log2(),
        bp.num_layers()
    );
    let mut value = framework_constants(&consts, &fin, red.binding().size_constant());
    let map = value.as_object_mut().expect("object");
    map.insert("engine".into(), json!("framework"));
    map.insert("exponent".into(), json!(format!("{:.4}", growth.log2())));
    map.insert("ok".into(), json!(ok));
    Ok(value)
}
