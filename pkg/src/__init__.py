"""dfq - relational queries over event logs with a directly-follows operator."""
