from atmoqkd.cli import main

raise SystemExit(main())
