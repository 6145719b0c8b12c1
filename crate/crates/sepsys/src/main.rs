fn main() {
    // die quietly on closed pipes (`sepsys tot ... | head`) like any unix tool
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(sepsys::cli::run_cli(std::env::args_os()));
}
