from invoke import task


@task
def test(ctx):
    ctx.run("pytest tests/ README.rst --cov=otmix")
    ctx.run("black --check otmix tests tasks.py")
    ctx.run("pycodestyle otmix tests tasks.py")


@task
def bench(ctx, trials=200, window=3, out="bench.csv"):
    ctx.run(
        f"python -m otmix bench --trials {trials} --noise 0.5 --dur-max 4 "
        f"--window {window} --methods relaxed,relaxed_window,ipot "
        f"-o {out} --trials-out trials-{out}"
    )
    print()
    ctx.run(f"cat {out}")


@task
def sweep(ctx, trials=50):
    sizes = "1,2,3,5,10,20"
    ctx.run(f"python -m otmix sweep --over window --values {sizes} --trials {trials}")
    print()
    ctx.run(f"python -m otmix sweep --over prob --values 0,0.2,0.5,1 --trials {trials}")
