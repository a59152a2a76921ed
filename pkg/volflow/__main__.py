from volflow.main import main

main()
