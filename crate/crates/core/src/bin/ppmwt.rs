fn main() {
    std::process::exit(ppm_wiretap::cli::run(std::env::args_os()));
}
