use maxswp::generate::random_tree;
use maxswp::tree::solve_tree;

fn peak_rss_mb() -> f64 {
    let status = std::fs::read_to_string("/proc/self/status").unwrap();
    let line = status.lines().find(|l| l.starts_with("VmHWM")).unwrap();
    let kb: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    kb / 1024.0
}

fn main() {
    let t = random_tree(1_000_000, 42);
    let mut best = f64::MAX;
    for _ in 0..3 {
        let s = std::time::Instant::now();
        let (_, v) = solve_tree(&t);
        let ms = s.elapsed().as_secs_f64() * 1e3;
        assert!(!v.is_negative());
        best = best.min(ms);
        println!("run ms={ms:.0}");
    }
    println!("best={best:.0}ms peak_rss={:.0}MB", peak_rss_mb());
}
