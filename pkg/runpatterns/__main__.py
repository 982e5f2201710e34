from runpatterns.cli.main import main

main()
