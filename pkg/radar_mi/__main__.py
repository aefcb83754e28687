from radar_mi.experiments.cli import main

main()
