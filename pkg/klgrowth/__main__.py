from klgrowth.cli import main

main()
