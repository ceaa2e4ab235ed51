from bellsep.cli import run

run()
