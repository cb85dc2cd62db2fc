import xsb_ladder

if __name__ == "__main__":
    xsb_ladder.main()
