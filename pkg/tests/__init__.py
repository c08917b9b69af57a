# Makes the tests directory a package; each module adds the project root to sys.path
