fn main() {
    std::process::exit(llv_lab::run(std::env::args_os()));
}
